#pragma once

#include "kedit/backend.hpp"
#include "kedit/fact_graph.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace kedit {

// Deterministic generator grounded in a FactGraph: parses the question and
// the partial chain out of the prompt, then emits the next parametric step
// (or the terminal answer once the question's relation path is used up).
// Returns an empty completion when the current entity has no outgoing
// triple, which the step generator treats as a dead end.
//
// A one-shot hallucination can be armed for fault-injection tests: when the
// parsed chain has exactly `depth` steps the configured sentence is emitted
// once instead of the true continuation.
class OracleBackend final : public GeneratorBackend {
public:
  explicit OracleBackend(std::shared_ptr<const FactGraph> graph);

  std::string complete(const GenerationRequest& request) override;
  std::string id() const override { return "oracle"; }

  void arm_hallucination(int depth, std::string sentence);

private:
  std::shared_ptr<const FactGraph> graph_;
  std::mutex fault_mutex_;
  std::optional<int> fault_depth_;
  std::string fault_sentence_;
};

} // namespace kedit
