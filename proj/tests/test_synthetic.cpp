#include "kedit/synthetic.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>

using namespace kedit;

namespace {

SyntheticOptions small() {
  SyntheticOptions opt;
  opt.seed = 9;
  opt.count = 30;
  return opt;
}

bool edit_equals_chain_hop(const Instance& inst, std::size_t hop,
                           const EditedFact& edit) {
  return edit.triple == inst.gold_chain[hop];
}

} // namespace

TEST_CASE("generation is deterministic in the seed") {
  auto a = gen_synthetic(small());
  auto b = gen_synthetic(small());
  REQUIRE(a.dataset.instances.size() == b.dataset.instances.size());
  for (std::size_t i = 0; i < a.dataset.instances.size(); ++i) {
    const auto& x = a.dataset.instances[i];
    const auto& y = b.dataset.instances[i];
    CHECK(x.id == y.id);
    CHECK(x.questions == y.questions);
    CHECK(x.new_answer == y.new_answer);
    CHECK(x.orig_answer == y.orig_answer);
    REQUIRE(x.edits.size() == y.edits.size());
    for (std::size_t k = 0; k < x.edits.size(); ++k) {
      CHECK(x.edits[k].text == y.edits[k].text);
    }
  }
  CHECK(a.graph->triples().size() == b.graph->triples().size());

  auto opt = small();
  opt.seed = 10;
  auto c = gen_synthetic(opt);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.dataset.instances.size(); ++i) {
    any_difference = any_difference ||
                     a.dataset.instances[i].questions !=
                         c.dataset.instances[i].questions;
  }
  CHECK(any_difference);
}

TEST_CASE("every instance changes its answer under its edits") {
  auto result = gen_synthetic(small());
  REQUIRE(result.dataset.instances.size() == 30);
  for (const auto& inst : result.dataset.instances) {
    CHECK(inst.hops() >= 2);
    CHECK(inst.hops() <= 4);
    CHECK(!inst.edits.empty());
    CHECK(inst.new_answer != inst.orig_answer);

    const auto& chain = inst.gold_chain;
    std::vector<std::string> path;
    for (const auto& t : chain) path.push_back(t.relation);
    // Edit-blind walk lands on the wrong answer, edited walk on the right.
    auto parametric = result.graph->walk(chain[0].subject, path);
    REQUIRE(parametric.has_value());
    CHECK(*parametric == inst.orig_answer);
    auto edited = result.graph->walk(chain[0].subject, path, &inst.edits);
    REQUIRE(edited.has_value());
    CHECK(*edited == inst.new_answer);

    // The question is registered for the oracle.
    const auto* spec = result.graph->find_question(inst.questions.at(0));
    REQUIRE(spec != nullptr);
    CHECK(spec->subject == chain[0].subject);
  }
}

TEST_CASE("entity namespaces do not collide across instances") {
  auto result = gen_synthetic(small());
  std::set<std::string> subjects;
  for (const auto& inst : result.dataset.instances) {
    for (const auto& edit : inst.edits) {
      // The instance index is baked into every entity name.
      CHECK(edit.triple.subject.find(inst.id.substr(inst.id.size() - 5)) !=
            std::string::npos);
      subjects.insert(edit.triple.subject + "/" + edit.triple.relation);
    }
  }
  // No (subject, relation) pair is shared between instances.
  std::size_t total_edits = 0;
  for (const auto& inst : result.dataset.instances)
    total_edits += inst.edits.size();
  CHECK(subjects.size() == total_edits);
}

TEST_CASE("all plants together stay within the retrieval budget") {
  SyntheticOptions opt;
  opt.seed = 4;
  opt.count = 20;
  opt.alias_edits = true;
  opt.branch_edits = true;
  opt.fault_distractors = true;
  opt.conflict_pairs = 5;
  auto result = gen_synthetic(opt);
  for (const auto& inst : result.dataset.instances) {
    CHECK(inst.edits.size() <= 5);
  }
}

TEST_CASE("alias edits rephrase hop 0 under another relation") {
  SyntheticOptions opt;
  opt.seed = 13;
  opt.count = 12;
  opt.alias_edits = true;
  auto result = gen_synthetic(opt);
  for (const auto& inst : result.dataset.instances) {
    const Triple& hop0 = inst.gold_chain[0];
    bool found = false;
    for (const auto& edit : inst.edits) {
      if (edit.triple.subject == hop0.subject &&
          edit.triple.object == hop0.object &&
          edit.triple.relation != hop0.relation) {
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("branch edits leave the chain and go nowhere") {
  SyntheticOptions opt;
  opt.seed = 2;
  opt.count = 12;
  opt.hops_min = 3;
  opt.hops_max = 3;
  opt.edits_min = 1;
  opt.edits_max = 1;
  opt.branch_edits = true;
  auto result = gen_synthetic(opt);
  for (const auto& inst : result.dataset.instances) {
    std::size_t branches = 0;
    for (const auto& edit : inst.edits) {
      if (edit.triple.object.rfind("b", 0) != 0) continue;
      ++branches;
      // A branch object has no outgoing triple under any chain relation.
      for (const auto& hop : inst.gold_chain) {
        CHECK_FALSE(result.graph
                        ->next_triple(edit.triple.object, hop.relation)
                        .has_value());
      }
      // It branches off a hop that is not the second-to-last or later.
      bool on_early_chain = false;
      for (std::size_t k = 0; k + 1 < inst.gold_chain.size(); ++k) {
        on_early_chain = on_early_chain ||
                         inst.gold_chain[k].subject == edit.triple.subject;
      }
      CHECK(on_early_chain);
    }
    CHECK(branches >= 1);
  }
}

TEST_CASE("fault plans point at an unedited interior hop") {
  SyntheticOptions opt;
  opt.seed = 6;
  opt.count = 15;
  opt.fault_distractors = true;
  auto result = gen_synthetic(opt);
  REQUIRE(result.fault_plans.size() == result.dataset.instances.size());
  for (std::size_t i = 0; i < result.fault_plans.size(); ++i) {
    const FaultPlan& plan = result.fault_plans[i];
    const Instance& inst = result.dataset.instances[i];
    CHECK(plan.instance_id == inst.id);
    CHECK(plan.depth + 2 <= inst.hops());

    // The planted hop carries no edit of its own.
    for (const auto& edit : inst.edits) {
      CHECK_FALSE(edit_equals_chain_hop(inst, plan.depth, edit));
    }
    // The distractor edit with the marker subject exists and dead-ends.
    bool found = false;
    for (const auto& edit : inst.edits) {
      if (edit.triple.subject == plan.subject_marker) {
        found = true;
        for (const auto& hop : inst.gold_chain) {
          CHECK_FALSE(result.graph
                          ->next_triple(edit.triple.object, hop.relation)
                          .has_value());
        }
      }
    }
    CHECK(found);
  }
}

TEST_CASE("conflict pairs flag exactly the planted victims") {
  SyntheticOptions opt;
  opt.seed = 8;
  opt.count = 10;
  opt.conflict_pairs = 3;
  auto result = gen_synthetic(opt);
  REQUIRE(result.injected_conflict_ids.size() == 3);
  CHECK(result.injected_conflict_ids ==
        std::vector<std::string>{result.dataset.instances[0].id,
                                 result.dataset.instances[2].id,
                                 result.dataset.instances[4].id});

  auto conflicted = detect_conflicts(result.dataset);
  std::set<std::string> expected(result.injected_conflict_ids.begin(),
                                 result.injected_conflict_ids.end());
  CHECK(conflicted == expected);

  Dataset clean = build_clean(result.dataset);
  CHECK(clean.instances.size() == result.dataset.instances.size() - 3);
  CHECK(detect_conflicts(clean).empty());
}

TEST_CASE("impossible option combinations are rejected") {
  SyntheticOptions opt;
  opt.count = 0;
  CHECK_THROWS_AS(gen_synthetic(opt), std::invalid_argument);

  opt = SyntheticOptions{};
  opt.hops_min = 3;
  opt.hops_max = 2;
  CHECK_THROWS_AS(gen_synthetic(opt), std::invalid_argument);

  opt = SyntheticOptions{};
  opt.hops_min = 1;
  opt.fault_distractors = true;
  CHECK_THROWS_AS(gen_synthetic(opt), std::invalid_argument);

  opt = SyntheticOptions{};
  opt.count = 4;
  opt.conflict_pairs = 3;
  CHECK_THROWS_AS(gen_synthetic(opt), std::invalid_argument);

  opt = SyntheticOptions{};
  opt.hops_max = 7;
  CHECK_THROWS_AS(gen_synthetic(opt), std::invalid_argument);
}
