#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "kedit/embedding.hpp"
#include "kedit/triple.hpp"

namespace kedit {

struct ScoredFact {
  const EditedFact* fact = nullptr;
  double distance = 0.0;
};

// Immutable bag of edited facts with embeddings. Safe for concurrent reads.
//
// Duplicate (subject, relation) pairs across different source instances are
// allowed (those are exactly the conflicts the bench layer detects); within
// one instance they are rejected.
class KnowledgeStore {
public:
  static KnowledgeStore build(std::vector<EditedFact> facts,
                              std::shared_ptr<EmbeddingProvider> provider);

  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<EditedFact>& facts() const { return facts_; }
  const EmbeddingVector& embedding_of(std::size_t i) const {
    return embeddings_[i];
  }
  EmbeddingProvider& provider() const { return *provider_; }

  // min(n, size) facts by ascending cosine distance to embed(query); ties
  // broken by lexicographic fact text.
  std::vector<ScoredFact> retrieve_top_n(const std::string& query,
                                         std::size_t n) const;

private:
  KnowledgeStore() = default;

  std::vector<EditedFact> facts_;
  std::vector<EmbeddingVector> embeddings_;
  std::shared_ptr<EmbeddingProvider> provider_;
  std::size_t dimension_ = 0;
};

} // namespace kedit
