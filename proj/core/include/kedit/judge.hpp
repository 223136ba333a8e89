#pragma once

#include "kedit/backend.hpp"
#include "kedit/constraints.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kedit {

// A labeled example for few-shot judge prompting.
struct JudgeDemo {
  ConstraintKind kind;
  std::string question;
  std::vector<std::string> chain;
  std::string candidate;
  bool label = false;
};

// JSON array of {constraint, question, chain, candidate, label}.
std::vector<JudgeDemo> load_judge_demos(const std::string& path);

struct JudgeConfig {
  unsigned seed = 7;
  std::size_t positive_demos = 2;
  std::size_t negative_demos = 2;
};

// Deterministic per-constraint demo pick: the configured number of positive
// and negative demos, sampled with the fixed seed.
std::map<ConstraintKind, std::vector<JudgeDemo>> sample_judge_demos(
    const std::vector<JudgeDemo>& all, const JudgeConfig& config);

std::string build_judge_prompt(ConstraintKind kind, const VerifierContext& ctx,
                               const std::string& candidate,
                               const std::vector<JudgeDemo>& demos);

// Leading yes/no (case-insensitive, word-bounded) anywhere useful: only the
// first token counts.
std::optional<bool> parse_yes_no(const std::string& text);

// Asks a generator backend to judge each constraint with a yes/no answer.
// Output that stays unparsable after two retries yields a failed verdict
// with rationale "unparsable" (recorded as an incident by search traces).
class JudgeVerifier final : public ConstraintVerifier {
public:
  JudgeVerifier(std::shared_ptr<GeneratorBackend> backend,
                std::vector<JudgeDemo> demos, JudgeConfig config = {});

  Verdict verify(ConstraintKind kind, const VerifierContext& ctx,
                 const std::string& candidate) override;
  std::string id() const override { return "judge"; }

private:
  std::shared_ptr<GeneratorBackend> backend_;
  std::map<ConstraintKind, std::vector<JudgeDemo>> demos_;
};

} // namespace kedit
