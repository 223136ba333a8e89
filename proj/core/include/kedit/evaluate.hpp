#pragma once

#include "kedit/dataset.hpp"
#include "kedit/search.hpp"

#include <nlohmann/json_fwd.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kedit {

enum class Method { Dfs, Bfs, Mello, ParametricOnly };

const char* to_string(Method method);
std::optional<Method> method_from_name(const std::string& name);

// Built per instance so stateful wrappers (fault injection) can differ
// across instances; stateless verifiers can return one shared object.
using VerifierFactory =
    std::function<std::shared_ptr<ConstraintVerifier>(const Instance&)>;

struct EvalOptions {
  SearchLimits limits;
  std::optional<std::size_t> batch_size = 100; // nullopt: one full batch
  std::optional<unsigned> shuffle_seed;
  std::size_t parallelism = 1;
  bool stable_output = false; // zero wall times for byte-stable reports
  DfsOptions dfs;
};

struct InstanceResult {
  std::string id;
  std::optional<std::string> predicted;
  bool correct = false;
  std::string termination;
  SearchTotals totals;
  bool flagged = false; // infrastructure failure; counted, never dropped
  std::string note;
};

struct EvalSummary {
  std::size_t instances = 0;
  std::size_t answered = 0;
  std::size_t correct = 0;
  std::size_t flagged = 0;
  double accuracy = 0.0;
  double mean_expansions = 0.0;
  double mean_generator_calls = 0.0;
  double mean_wall_ms = 0.0;
  std::size_t total_backtracks = 0;
};

struct EvalReport {
  std::string method;
  std::string dataset;
  std::vector<InstanceResult> results; // dataset order
  EvalSummary summary;
};

// True when `predicted` equals the instance's new answer or one of its
// aliases, compared case-insensitively with edge punctuation trimmed.
bool answer_matches(const std::string& predicted, const Instance& instance);

// Runs `method` over every instance (first question of each). Instances are
// grouped into batches whose union of edits forms the retrieval store.
// Per-instance wall time covers the search only, not store construction.
// Worker threads share the backend; results keep dataset order.
EvalReport evaluate(Method method, const Dataset& dataset,
                    GeneratorBackend& backend,
                    const VerifierFactory& verifier_factory,
                    std::shared_ptr<EmbeddingProvider> provider,
                    const SentenceTemplates& templates,
                    const EvalOptions& options);

nlohmann::json result_to_json(const InstanceResult& result,
                              const std::string& method);
nlohmann::json summary_to_json(const EvalReport& report);

// One JSON object per line, one line per instance, dataset order.
void write_report_jsonl(const EvalReport& report, const std::string& path);
void write_report_summary(const EvalReport& report, const std::string& path);

} // namespace kedit
