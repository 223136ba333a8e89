#pragma once

#include "kedit/store.hpp"
#include "kedit/templates.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace kedit {

enum class ConstraintKind { Conciseness, Coherence, Receptiveness, Pertinence };

constexpr std::array<ConstraintKind, 4> kAllConstraints = {
    ConstraintKind::Conciseness, ConstraintKind::Coherence,
    ConstraintKind::Receptiveness, ConstraintKind::Pertinence};

const char* to_string(ConstraintKind kind);

struct Verdict {
  ConstraintKind kind;
  bool passed = false;
  // Short-circuited before execution; counts as not-passed in validity.
  bool skipped = false;
  std::string rationale;
  std::string verifier_id;
};

struct VerifierContext {
  const std::string& question;
  std::span<const std::string> chain; // accepted steps so far
  const KnowledgeStore& store;
};

class ConstraintVerifier {
public:
  virtual ~ConstraintVerifier() = default;
  virtual Verdict verify(ConstraintKind kind, const VerifierContext& ctx,
                         const std::string& candidate) = 0;
  virtual std::string id() const = 0;
};

struct VerdictSet {
  std::vector<Verdict> verdicts; // in execution order, each tagged with kind
  bool valid = false;            // all four passed
  std::size_t executed = 0;      // verifier invocations (skips excluded)
};

// Runs the four constraints cheapest-first (Conciseness, Receptiveness,
// Coherence, Pertinence), short-circuiting on the first failure; the
// remaining constraints are recorded as skipped.
VerdictSet verify_all(ConstraintVerifier& verifier, const VerifierContext& ctx,
                      const std::string& candidate);

// Deterministic rule-based verifier over sentence-template parses.
// Candidates that parse as neither a fact sentence nor a terminal answer
// fail Receptiveness and Coherence closed.
class RuleVerifier final : public ConstraintVerifier {
public:
  explicit RuleVerifier(SentenceTemplates templates);
  Verdict verify(ConstraintKind kind, const VerifierContext& ctx,
                 const std::string& candidate) override;
  std::string id() const override { return "rules"; }

  const SentenceTemplates& templates() const { return templates_; }

private:
  SentenceTemplates templates_;
};

} // namespace kedit
