#include "kedit/store.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "kedit/errors.hpp"

namespace kedit {

KnowledgeStore KnowledgeStore::build(
    std::vector<EditedFact> facts,
    std::shared_ptr<EmbeddingProvider> provider) {
  if (!provider) throw std::invalid_argument("build: null embedding provider");

  // Reject contradictory (subject, relation) duplicates inside one instance.
  std::unordered_set<std::string> seen;
  for (const auto& f : facts) {
    validate_triple(f.triple);
    std::string key = f.source_instance + '\x1e' + f.triple.subject_relation_key();
    if (!seen.insert(key).second) {
      throw std::invalid_argument(
          "duplicate (subject, relation) edit within instance '" +
          f.source_instance + "': " + f.triple.subject + " / " +
          f.triple.relation);
    }
  }

  KnowledgeStore store;
  store.provider_ = std::move(provider);
  store.dimension_ = store.provider_->dimension();

  std::vector<std::string> texts;
  texts.reserve(facts.size());
  for (const auto& f : facts) texts.push_back(f.text);

  if (!texts.empty()) {
    store.embeddings_ = store.provider_->embed_batch(texts);
    if (store.embeddings_.size() != facts.size())
      throw ProviderError("provider returned wrong number of vectors", false);
    for (const auto& e : store.embeddings_) {
      if (e.dimension() != store.dimension_)
        throw ProviderError("provider returned wrong embedding dimension", false);
      if (!e.finite() || !e.unit_norm(1e-4))
        throw ProviderError("provider returned a non-unit or non-finite vector",
                            false);
    }
  }
  store.facts_ = std::move(facts);
  return store;
}

std::vector<ScoredFact> KnowledgeStore::retrieve_top_n(
    const std::string& query, std::size_t n) const {
  if (n == 0) throw std::invalid_argument("retrieve_top_n: n must be >= 1");
  if (facts_.empty()) return {};

  EmbeddingVector q = provider_->embed(query);
  std::vector<ScoredFact> scored;
  scored.reserve(facts_.size());
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    scored.push_back({&facts_[i], cosine_distance(q, embeddings_[i])});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredFact& a, const ScoredFact& b) {
                     if (a.distance != b.distance)
                       return a.distance < b.distance;
                     return a.fact->text < b.fact->text;
                   });
  if (scored.size() > n) scored.resize(n);
  return scored;
}

} // namespace kedit
