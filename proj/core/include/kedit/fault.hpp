#pragma once

#include "kedit/constraints.hpp"
#include "kedit/text.hpp"

#include <memory>
#include <string>
#include <utility>

namespace kedit {

// Test wrapper that admits a planted wrong candidate: at the configured
// chain depth, any candidate whose parsed subject matches `subject_marker`
// passes every constraint. Everything else is delegated to the wrapped
// verifier. Used to prove the search recovers from verifier mistakes by
// backtracking.
class FaultInjectingVerifier final : public ConstraintVerifier {
public:
  FaultInjectingVerifier(std::shared_ptr<ConstraintVerifier> inner,
                         SentenceTemplates templates, std::size_t depth,
                         std::string subject_marker)
      : inner_(std::move(inner)),
        templates_(std::move(templates)),
        depth_(depth),
        marker_(normalize_entity(subject_marker)) {}

  Verdict verify(ConstraintKind kind, const VerifierContext& ctx,
                 const std::string& candidate) override {
    if (ctx.chain.size() == depth_) {
      auto triple = templates_.parse(candidate);
      if (triple && normalize_entity(triple->subject) == marker_) {
        Verdict v;
        v.kind = kind;
        v.passed = true;
        v.rationale = "fault-injected pass";
        v.verifier_id = id();
        return v;
      }
    }
    return inner_->verify(kind, ctx, candidate);
  }

  std::string id() const override { return "fault+" + inner_->id(); }

private:
  std::shared_ptr<ConstraintVerifier> inner_;
  SentenceTemplates templates_;
  std::size_t depth_;
  std::string marker_;
};

} // namespace kedit
