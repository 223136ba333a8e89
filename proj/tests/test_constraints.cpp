#include "kedit/constraints.hpp"

#include "helpers.hpp"

#include "doctest.h"

#include <vector>

using namespace kedit;
using namespace kedit::testutil;

namespace {

struct Fixture {
  SentenceTemplates templates = SentenceTemplates::defaults();
  KnowledgeStore store;
  RuleVerifier verifier;
  std::string question = "What is the capital of the country where the "
                         "Eiffel Tower is located?";

  Fixture()
      : store(make_store({make_fact(SentenceTemplates::defaults(), "France",
                                    "capital-of", "Lyon", "i1")})),
        verifier(SentenceTemplates::defaults()) {}

  Verdict check(ConstraintKind kind, const std::vector<std::string>& chain,
                const std::string& candidate) {
    VerifierContext ctx{question, chain, store};
    return verifier.verify(kind, ctx, candidate);
  }
};

} // namespace

TEST_CASE("conciseness rejects repeated steps") {
  Fixture f;
  std::vector<std::string> chain = {
      "Eiffel Tower is located in the country of France."};
  CHECK(f.check(ConstraintKind::Conciseness, chain,
                "The capital of France is Lyon.")
            .passed);
  auto repeat = f.check(ConstraintKind::Conciseness, chain,
                        "eiffel tower is located in the country of France.");
  CHECK_FALSE(repeat.passed);
  CHECK(repeat.rationale == "repeats an earlier step");
  // Unparsable text can still be concise; other constraints deal with it.
  CHECK(f.check(ConstraintKind::Conciseness, chain, "mumble mumble").passed);
}

TEST_CASE("receptiveness rejects contradictions of stored knowledge") {
  Fixture f;
  // The store says the capital of France is Lyon.
  CHECK(f.check(ConstraintKind::Receptiveness, {},
                "The capital of France is Lyon.")
            .passed);
  auto clash = f.check(ConstraintKind::Receptiveness, {},
                       "The capital of France is Paris.");
  CHECK_FALSE(clash.passed);
  CHECK(clash.rationale.find("contradicts new knowledge") == 0);
  // A different subject is not a contradiction.
  CHECK(f.check(ConstraintKind::Receptiveness, {},
                "The capital of Germany is Berlin.")
            .passed);
  // Terminal answers assert no triple.
  CHECK(f.check(ConstraintKind::Receptiveness, {}, "Lyon is the answer.")
            .passed);
  auto mumble = f.check(ConstraintKind::Receptiveness, {}, "mumble mumble");
  CHECK_FALSE(mumble.passed);
  CHECK(mumble.rationale == "unparsable candidate");
}

TEST_CASE("coherence ties each step to the chain tip") {
  Fixture f;

  SUBCASE("first step must start from an entity in the question") {
    CHECK(f.check(ConstraintKind::Coherence, {},
                  "Eiffel Tower is located in the country of France.")
              .passed);
    auto stray = f.check(ConstraintKind::Coherence, {},
                         "The capital of Germany is Berlin.");
    CHECK_FALSE(stray.passed);
    CHECK(stray.rationale == "subject not in the question");
  }

  SUBCASE("later steps must continue from the previous object") {
    std::vector<std::string> chain = {
        "Eiffel Tower is located in the country of France."};
    CHECK(f.check(ConstraintKind::Coherence, chain,
                  "The capital of France is Lyon.")
              .passed);
    auto skip = f.check(ConstraintKind::Coherence, chain,
                        "The capital of Germany is Berlin.");
    CHECK_FALSE(skip.passed);
    CHECK(skip.rationale.find("does not continue from") == 0);
  }

  SUBCASE("terminal answers play their entity as the subject") {
    std::vector<std::string> chain = {
        "Eiffel Tower is located in the country of France.",
        "The capital of France is Lyon."};
    CHECK(f.check(ConstraintKind::Coherence, chain, "Lyon is the answer.")
              .passed);
    CHECK_FALSE(
        f.check(ConstraintKind::Coherence, chain, "Paris is the answer.")
            .passed);
  }

  SUBCASE("unparsable candidates fail closed") {
    auto v = f.check(ConstraintKind::Coherence, {}, "mumble mumble");
    CHECK_FALSE(v.passed);
    CHECK(v.rationale == "unparsable candidate");
  }
}

TEST_CASE("pertinence wants an entity the question or chain already names") {
  Fixture f;
  CHECK(f.check(ConstraintKind::Pertinence, {},
                "Eiffel Tower is located in the country of France.")
            .passed);
  // Off-topic step: neither subject nor object appears anywhere.
  auto off = f.check(ConstraintKind::Pertinence, {},
                     "The capital of Germany is Berlin.");
  CHECK_FALSE(off.passed);
  CHECK(off.rationale == "shares no entity with the question or chain");
  // Once the chain mentions France, its onward steps are pertinent.
  std::vector<std::string> chain = {
      "Eiffel Tower is located in the country of France."};
  CHECK(f.check(ConstraintKind::Pertinence, chain,
                "The capital of France is Lyon.")
            .passed);
  // Terminal answer: the answer entity stands alone.
  std::vector<std::string> full = {
      "Eiffel Tower is located in the country of France.",
      "The capital of France is Lyon."};
  CHECK(f.check(ConstraintKind::Pertinence, full, "Lyon is the answer.")
            .passed);
  CHECK_FALSE(f.check(ConstraintKind::Pertinence, {}, "Oslo is the answer.")
                  .passed);
}

TEST_CASE("verify_all runs cheap checks first and short-circuits") {
  Fixture f;
  VerifierContext ctx{f.question, {}, f.store};

  SUBCASE("a fully valid candidate executes all four") {
    auto set = verify_all(f.verifier,  ctx,
                          "Eiffel Tower is located in the country of France.");
    CHECK(set.valid);
    CHECK(set.executed == 4);
    REQUIRE(set.verdicts.size() == 4);
    CHECK(set.verdicts[0].kind == ConstraintKind::Conciseness);
    CHECK(set.verdicts[1].kind == ConstraintKind::Receptiveness);
    CHECK(set.verdicts[2].kind == ConstraintKind::Coherence);
    CHECK(set.verdicts[3].kind == ConstraintKind::Pertinence);
    for (const auto& v : set.verdicts) CHECK_FALSE(v.skipped);
  }

  SUBCASE("a receptiveness failure skips the rest") {
    auto set = verify_all(f.verifier, ctx, "The capital of France is Paris.");
    CHECK_FALSE(set.valid);
    CHECK(set.executed == 2); // conciseness passed, receptiveness failed
    REQUIRE(set.verdicts.size() == 4);
    CHECK_FALSE(set.verdicts[1].passed);
    CHECK(set.verdicts[2].skipped);
    CHECK(set.verdicts[3].skipped);
    CHECK(set.verdicts[2].rationale == "skipped after earlier failure");
  }

  SUBCASE("skipped verdicts count as not passed") {
    auto set = verify_all(f.verifier, ctx, "The capital of France is Paris.");
    for (const auto& v : set.verdicts) {
      if (v.skipped) CHECK_FALSE(v.passed);
    }
  }
}

TEST_CASE("constraint names are stable") {
  CHECK(std::string(to_string(ConstraintKind::Conciseness)) == "conciseness");
  CHECK(std::string(to_string(ConstraintKind::Coherence)) == "coherence");
  CHECK(std::string(to_string(ConstraintKind::Receptiveness)) ==
        "receptiveness");
  CHECK(std::string(to_string(ConstraintKind::Pertinence)) == "pertinence");
}
