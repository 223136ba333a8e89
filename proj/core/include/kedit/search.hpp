#pragma once

#include "kedit/backend.hpp"
#include "kedit/constraints.hpp"
#include "kedit/store.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kedit {

enum class SourceKind { Parametric, Edited };

struct SearchLimits {
  std::size_t retrieval_n = 5;  // edited facts retrieved per expansion
  std::size_t d_max = 8;        // maximum chain length
  std::size_t node_budget = 200; // maximum expansions per question
  void validate() const;        // throws ConfigError on nonpositive limits
};

struct Candidate {
  std::string text;
  SourceKind source = SourceKind::Parametric;
  // Edited candidates remember where they came from.
  std::optional<double> distance;
  std::optional<Triple> fact_triple;
  std::string fact_source_instance;
  // Filled by verification.
  std::vector<Verdict> verdicts;
  bool valid = false;
};

// One expansion: the node's chain, its candidate pool in proposal order
// (parametric first), which candidates were followed, and notable events
// ("backtrack", "depth-limit", "answer-found", "generator-dead-end").
struct IterationRecord {
  std::vector<std::string> chain;
  bool generator_dead_end = false;
  std::vector<Candidate> candidates;
  std::vector<std::size_t> choices; // indices into candidates, in try order
  std::vector<std::string> events;
};

struct SearchTotals {
  std::size_t expansions = 0;
  std::size_t generator_calls = 0;
  std::size_t verifier_calls = 0;
  std::size_t backtracks = 0;
  std::size_t unparsable_incidents = 0; // judge replies that never parsed
  double wall_ms = 0.0;
};

struct SearchTrace {
  std::vector<IterationRecord> iterations;
  SearchTotals totals;
};

nlohmann::json trace_to_json(const SearchTrace& trace);

enum class Termination { Answered, Exhausted, BudgetExceeded, DepthLimited };
const char* to_string(Termination t);

struct Outcome {
  std::optional<std::string> answer; // present iff termination == Answered
  Termination termination = Termination::Exhausted;
  SearchTrace trace;
};

// Proposes candidates for a node: the temperature-0 parametric step (when
// the generator produces one) plus the top retrieved edited facts, verified
// and deduplicated by normalized text (edited wins over parametric).
// Retrieval queries use the chain's last step, or the question at the root.
std::vector<Candidate> propose(const std::string& question,
                               const std::vector<std::string>& chain,
                               const KnowledgeStore& store,
                               GeneratorBackend& backend,
                               ConstraintVerifier& verifier,
                               const SearchLimits& limits,
                               SearchTotals& totals, bool& dead_end);

// Importance order over the valid candidates of one node: edited facts
// before the parametric step; edited facts by ascending embedding distance;
// ties broken lexicographically by text. Returns indices into `candidates`.
std::vector<std::size_t> rank_valid(const std::vector<Candidate>& candidates);

struct DfsOptions {
  bool early_stop = true; // stop at the first complete chain
};

Outcome dfs(const std::string& question, const KnowledgeStore& store,
            GeneratorBackend& backend, ConstraintVerifier& verifier,
            const SearchLimits& limits, const DfsOptions& options = {});

// Level-order baseline: expands every valid candidate of every frontier
// node, answering with the first terminal found in scan order.
Outcome bfs(const std::string& question, const KnowledgeStore& store,
            GeneratorBackend& backend, ConstraintVerifier& verifier,
            const SearchLimits& limits);

// Greedy memory-editing baseline: generate a step, retrieve the single
// closest edited fact, and take the fact instead of the step only when the
// two disagree on the same (subject, relation). No constraint checking, no
// backtracking.
Outcome mello(const std::string& question, const KnowledgeStore& store,
              GeneratorBackend& backend, const SentenceTemplates& templates,
              const SearchLimits& limits);

// Edits ignored entirely: follow the generator until it answers or runs out.
Outcome parametric_only(const std::string& question, GeneratorBackend& backend,
                        const SearchLimits& limits);

} // namespace kedit
