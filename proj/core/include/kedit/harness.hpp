#pragma once

#include "kedit/constraints.hpp"
#include "kedit/synthetic.hpp"

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace kedit {

// One labeled verifier check: should `candidate` pass `kind` given this
// question, chain prefix, and the instance's edit store?
struct HarnessPair {
  ConstraintKind kind;
  std::string instance_id;
  std::string question;
  std::vector<std::string> chain;
  std::string candidate;
  bool label = false;
};

struct HarnessSuite {
  std::vector<HarnessPair> pairs;
  std::map<std::string, std::shared_ptr<const KnowledgeStore>> stores;
};

// Samples `per_constraint` pairs per constraint (half positive, half
// negative) out of a synthetic world: positives are the next gold step,
// negatives violate exactly the targeted constraint (a repeated step, a
// non-continuing step, a displaced parametric fact, a step from another
// instance).
HarnessSuite build_harness_suite(const SyntheticResult& synth,
                                 std::shared_ptr<EmbeddingProvider> provider,
                                 unsigned seed, std::size_t per_constraint);

struct HarnessRow {
  std::string constraint;
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

struct HarnessReport {
  std::string verifier;
  std::vector<HarnessRow> rows; // one per constraint
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

HarnessReport run_harness(ConstraintVerifier& verifier,
                          const HarnessSuite& suite);

nlohmann::json harness_report_to_json(const HarnessReport& report);

} // namespace kedit
