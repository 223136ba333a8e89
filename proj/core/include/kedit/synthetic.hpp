#pragma once

#include "kedit/dataset.hpp"
#include "kedit/fact_graph.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace kedit {

// Knobs for generated benchmark worlds. Entity namespaces are disjoint per
// instance, so nothing collides across instances unless explicitly planted.
struct SyntheticOptions {
  unsigned seed = 0;
  std::size_t count = 100;
  std::size_t hops_min = 2;
  std::size_t hops_max = 4;
  std::size_t edits_min = 1;
  std::size_t edits_max = 4;

  // Plants one extra edit per chosen instance that rephrases a real hop
  // under a different relation, giving the instance a second complete valid
  // reasoning chain to the same answer.
  bool alias_edits = false;

  // Plants edits that branch off the gold chain into entities with no
  // continuation: plausible-looking candidates whose subtrees dead-end.
  bool branch_edits = false;

  // Plants one dead-end distractor edit per instance, far from the gold
  // chain, together with a fault plan (below) naming the unedited hop where
  // a faulty verifier should wave it through.
  bool fault_distractors = false;

  // Number of (victim, actor) pairs where the actor gains an edit that
  // contradicts a triple on the victim's gold chain.
  std::size_t conflict_pairs = 0;

  std::string name = "synthetic";
};

// Where a fault-injecting verifier should admit the planted distractor:
// candidates whose subject is `subject_marker` at chain depth `depth`.
struct FaultPlan {
  std::string instance_id;
  std::size_t depth = 0;
  std::string subject_marker;
};

struct SyntheticResult {
  Dataset dataset;
  // Parametric world grounding the oracle generator: pre-edit facts, decoy
  // continuations behind every edited hop, and the registered questions.
  std::shared_ptr<FactGraph> graph;
  // Instances planted as conflict victims, in order.
  std::vector<std::string> injected_conflict_ids;
  std::vector<FaultPlan> fault_plans;
  // Per instance: the pre-edit (decoy) triples displaced by its edits.
  std::map<std::string, std::vector<Triple>> parametric_decoys;
};

// Deterministic in `options.seed`. Throws std::invalid_argument on option
// combinations that cannot be honored (see checks at the top of the
// implementation).
SyntheticResult gen_synthetic(const SyntheticOptions& options);

} // namespace kedit
