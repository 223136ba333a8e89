#include "kedit/harness.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <stdexcept>

namespace kedit {

namespace {

struct InstanceView {
  const Instance* instance = nullptr;
  std::vector<std::string> rendered_chain; // gold steps in sentence form
  const std::vector<Triple>* decoys = nullptr;
};

std::size_t pick(std::mt19937& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

} // namespace

HarnessSuite build_harness_suite(const SyntheticResult& synth,
                                 std::shared_ptr<EmbeddingProvider> provider,
                                 unsigned seed, std::size_t per_constraint) {
  const auto& instances = synth.dataset.instances;
  if (instances.size() < 2)
    throw std::invalid_argument("harness needs at least two instances");
  if (per_constraint < 2)
    throw std::invalid_argument("harness needs at least two pairs per kind");
  bool any_decoys = false;
  for (const auto& inst : instances) {
    if (inst.hops() < 2)
      throw std::invalid_argument("harness needs two hops per instance");
    auto it = synth.parametric_decoys.find(inst.id);
    any_decoys = any_decoys ||
                 (it != synth.parametric_decoys.end() && !it->second.empty());
  }
  if (!any_decoys)
    throw std::invalid_argument(
        "harness needs at least one edited instance for receptiveness pairs");

  const SentenceTemplates& templates = synth.graph->templates();

  std::vector<InstanceView> views;
  HarnessSuite suite;
  for (const auto& inst : instances) {
    InstanceView view;
    view.instance = &inst;
    for (const auto& t : inst.gold_chain) {
      view.rendered_chain.push_back(templates.render(t));
    }
    auto it = synth.parametric_decoys.find(inst.id);
    if (it != synth.parametric_decoys.end()) view.decoys = &it->second;
    views.push_back(std::move(view));
    suite.stores.emplace(
        inst.id, std::make_shared<KnowledgeStore>(
                     KnowledgeStore::build(inst.edits, provider)));
  }

  std::mt19937 rng(seed);

  auto chain_prefix = [](const InstanceView& view, std::size_t t) {
    return std::vector<std::string>(view.rendered_chain.begin(),
                                    view.rendered_chain.begin() +
                                        static_cast<std::ptrdiff_t>(t));
  };

  for (ConstraintKind kind : kAllConstraints) {
    for (std::size_t n = 0; n < per_constraint; ++n) {
      const bool positive = n % 2 == 0;
      const InstanceView& view = views[pick(rng, 0, views.size() - 1)];
      const std::size_t hops = view.rendered_chain.size();

      HarnessPair pair;
      pair.kind = kind;
      pair.instance_id = view.instance->id;
      pair.question = view.instance->questions.front();
      pair.label = positive;

      if (positive) {
        // The next gold step satisfies all four constraints.
        const std::size_t t = pick(rng, 0, hops - 1);
        pair.chain = chain_prefix(view, t);
        pair.candidate = view.rendered_chain[t];
        suite.pairs.push_back(std::move(pair));
        continue;
      }

      switch (kind) {
        case ConstraintKind::Conciseness: {
          // Repeat a step the chain already contains.
          const std::size_t t = pick(rng, 1, hops - 1);
          pair.chain = chain_prefix(view, t);
          pair.candidate = view.rendered_chain[pick(rng, 0, t - 1)];
          break;
        }
        case ConstraintKind::Coherence: {
          // A later gold step: its subject is not what the chain reached.
          const std::size_t t = pick(rng, 0, hops - 2);
          pair.chain = chain_prefix(view, t);
          pair.candidate = view.rendered_chain[t + 1];
          break;
        }
        case ConstraintKind::Receptiveness: {
          // The displaced parametric fact contradicts the stored edit.
          if (view.decoys == nullptr || view.decoys->empty()) {
            // No edit displaced anything here; resample another instance.
            --n;
            continue;
          }
          const Triple& decoy =
              (*view.decoys)[pick(rng, 0, view.decoys->size() - 1)];
          std::size_t hop = 0;
          for (std::size_t k = 0; k < view.instance->gold_chain.size(); ++k) {
            if (view.instance->gold_chain[k].subject == decoy.subject) hop = k;
          }
          pair.chain = chain_prefix(view, hop);
          pair.candidate = templates.render(decoy);
          break;
        }
        case ConstraintKind::Pertinence: {
          // A step from a disjoint instance shares nothing with this one.
          std::size_t other = pick(rng, 0, views.size() - 2);
          if (&views[other] == &view) other = views.size() - 1;
          const InstanceView& foreign = views[other];
          const std::size_t t = pick(rng, 0, hops - 1);
          pair.chain = chain_prefix(view, t);
          pair.candidate = foreign.rendered_chain[pick(
              rng, 0, foreign.rendered_chain.size() - 1)];
          break;
        }
      }
      suite.pairs.push_back(std::move(pair));
    }
  }
  return suite;
}

HarnessReport run_harness(ConstraintVerifier& verifier,
                          const HarnessSuite& suite) {
  HarnessReport report;
  report.verifier = verifier.id();

  std::map<ConstraintKind, HarnessRow> rows;
  for (ConstraintKind kind : kAllConstraints) {
    rows[kind].constraint = to_string(kind);
  }

  for (const auto& pair : suite.pairs) {
    const auto& store = suite.stores.at(pair.instance_id);
    VerifierContext ctx{pair.question,
                        std::span<const std::string>(pair.chain), *store};
    Verdict verdict = verifier.verify(pair.kind, ctx, pair.candidate);
    HarnessRow& row = rows[pair.kind];
    ++row.total;
    if (verdict.passed == pair.label) ++row.correct;
  }

  for (ConstraintKind kind : kAllConstraints) {
    HarnessRow& row = rows[kind];
    if (row.total > 0)
      row.accuracy =
          static_cast<double>(row.correct) / static_cast<double>(row.total);
    report.total += row.total;
    report.correct += row.correct;
    report.rows.push_back(row);
  }
  if (report.total > 0)
    report.accuracy = static_cast<double>(report.correct) /
                      static_cast<double>(report.total);
  return report;
}

nlohmann::json harness_report_to_json(const HarnessReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"constraint", row.constraint},
                    {"total", row.total},
                    {"correct", row.correct},
                    {"accuracy", row.accuracy}});
  }
  return {{"verifier", report.verifier},
          {"rows", std::move(rows)},
          {"total", report.total},
          {"correct", report.correct},
          {"accuracy", report.accuracy}};
}

} // namespace kedit
