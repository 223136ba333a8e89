#include "kedit/constraints.hpp"

#include "kedit/prompt.hpp"
#include "kedit/text.hpp"

#include <optional>

namespace kedit {

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Conciseness: return "conciseness";
    case ConstraintKind::Coherence: return "coherence";
    case ConstraintKind::Receptiveness: return "receptiveness";
    case ConstraintKind::Pertinence: return "pertinence";
  }
  return "?";
}

VerdictSet verify_all(ConstraintVerifier& verifier, const VerifierContext& ctx,
                      const std::string& candidate) {
  // Cheapest first; order matters only for how much work failures save.
  static constexpr std::array<ConstraintKind, 4> order = {
      ConstraintKind::Conciseness, ConstraintKind::Receptiveness,
      ConstraintKind::Coherence, ConstraintKind::Pertinence};

  VerdictSet out;
  bool failed = false;
  for (ConstraintKind kind : order) {
    if (failed) {
      Verdict v;
      v.kind = kind;
      v.passed = false;
      v.skipped = true;
      v.rationale = "skipped after earlier failure";
      v.verifier_id = verifier.id();
      out.verdicts.push_back(std::move(v));
      continue;
    }
    Verdict v = verifier.verify(kind, ctx, candidate);
    ++out.executed;
    if (!v.passed) failed = true;
    out.verdicts.push_back(std::move(v));
  }
  out.valid = !failed;
  return out;
}

namespace {

// What a candidate sentence claims: a fact triple, a terminal answer, or
// nothing recognizable.
struct ParsedCandidate {
  std::optional<std::string> answer;
  std::optional<Triple> triple;
};

ParsedCandidate parse_candidate(const SentenceTemplates& templates,
                                const std::string& candidate) {
  ParsedCandidate parsed;
  parsed.answer = extract_answer(candidate);
  if (!parsed.answer) parsed.triple = templates.parse(candidate);
  return parsed;
}

// The entity a chain hands to the next step: the object of its last step.
std::optional<std::string> last_entity(const SentenceTemplates& templates,
                                       std::span<const std::string> chain) {
  if (chain.empty()) return std::nullopt;
  ParsedCandidate prev = parse_candidate(templates, chain.back());
  if (prev.triple) return prev.triple->object;
  if (prev.answer) return prev.answer;
  return std::nullopt;
}

std::vector<std::string> candidate_entities(const ParsedCandidate& parsed) {
  if (parsed.answer) return {*parsed.answer};
  if (parsed.triple) return {parsed.triple->subject, parsed.triple->object};
  return {};
}

} // namespace

RuleVerifier::RuleVerifier(SentenceTemplates templates)
    : templates_(std::move(templates)) {}

Verdict RuleVerifier::verify(ConstraintKind kind, const VerifierContext& ctx,
                             const std::string& candidate) {
  Verdict v;
  v.kind = kind;
  v.verifier_id = id();

  const ParsedCandidate parsed = parse_candidate(templates_, candidate);

  switch (kind) {
    case ConstraintKind::Conciseness: {
      const std::string norm = normalize_field(candidate);
      for (const auto& step : ctx.chain) {
        if (normalize_field(step) == norm) {
          v.passed = false;
          v.rationale = "repeats an earlier step";
          return v;
        }
      }
      v.passed = true;
      return v;
    }

    case ConstraintKind::Receptiveness: {
      // Terminal answers assert no fact, so there is nothing to contradict.
      if (parsed.answer) {
        v.passed = true;
        return v;
      }
      if (!parsed.triple) {
        v.passed = false;
        v.rationale = "unparsable candidate";
        return v;
      }
      for (const auto& fact : ctx.store.facts()) {
        if (fact.triple.same_subject_relation(*parsed.triple) &&
            normalize_entity(fact.triple.object) !=
                normalize_entity(parsed.triple->object)) {
          v.passed = false;
          v.rationale = "contradicts new knowledge: " + fact.text;
          return v;
        }
      }
      v.passed = true;
      return v;
    }

    case ConstraintKind::Coherence: {
      // The subject must be what the reasoning has already reached: the
      // previous step's object, or for the first step an entity named in
      // the question. A terminal answer plays its entity as the subject.
      std::optional<std::string> subject;
      if (parsed.answer) {
        subject = parsed.answer;
      } else if (parsed.triple) {
        subject = parsed.triple->subject;
      } else {
        v.passed = false;
        v.rationale = "unparsable candidate";
        return v;
      }
      if (ctx.chain.empty()) {
        v.passed = contains_normalized(ctx.question, *subject);
        if (!v.passed) v.rationale = "subject not in the question";
        return v;
      }
      std::optional<std::string> prev = last_entity(templates_, ctx.chain);
      if (!prev) {
        v.passed = false;
        v.rationale = "previous step has no recognizable object";
        return v;
      }
      v.passed = normalize_entity(*subject) == normalize_entity(*prev);
      if (!v.passed) v.rationale = "does not continue from " + *prev;
      return v;
    }

    case ConstraintKind::Pertinence: {
      const std::vector<std::string> entities = candidate_entities(parsed);
      for (const auto& entity : entities) {
        if (contains_normalized(ctx.question, entity)) {
          v.passed = true;
          return v;
        }
        for (const auto& step : ctx.chain) {
          if (contains_normalized(step, entity)) {
            v.passed = true;
            return v;
          }
        }
      }
      v.passed = false;
      v.rationale = entities.empty()
                        ? "unparsable candidate"
                        : "shares no entity with the question or chain";
      return v;
    }
  }
  v.passed = false;
  v.rationale = "unknown constraint";
  return v;
}

} // namespace kedit
