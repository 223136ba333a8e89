#include "kedit/synthetic.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace kedit {

namespace {

struct RelationDef {
  const char* id;
  const char* pattern;
  const char* fragment;
};

// Nine relations so a path of up to six hops plus alias/branch/distractor
// extras can all use distinct relations within one instance.
constexpr RelationDef kPool[] = {
    {"in-country", "{s} is located in the country of {o}.",
     "the country where {x} is located"},
    {"capital-of", "The capital of {s} is {o}.", "the capital of {x}"},
    {"created-by", "{s} was created by {o}.", "the creator of {x}"},
    {"educated-at", "{s} was educated at {o}.",
     "the university where {x} was educated"},
    {"in-continent", "{s} is located in the continent of {o}.",
     "the continent where {x} is located"},
    {"led-by", "{s} is led by {o}.", "the leader of {x}"},
    {"headquartered-in", "{s} is headquartered in the city of {o}.",
     "the city where {x} is headquartered"},
    {"citizen-of", "{s} is a citizen of {o}.",
     "the country of citizenship of {x}"},
    {"spouse-of", "The spouse of {s} is {o}.", "the spouse of {x}"},
};
constexpr std::size_t kPoolSize = sizeof(kPool) / sizeof(kPool[0]);

// Edits an instance can carry while staying fully retrievable under the
// default retrieval depth.
constexpr std::size_t kStoreBudget = 5;

std::string pad5(std::size_t i) {
  std::string digits = std::to_string(i);
  return std::string(digits.size() < 5 ? 5 - digits.size() : 0, '0') + digits;
}

std::size_t pick(std::mt19937& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

} // namespace

SyntheticResult gen_synthetic(const SyntheticOptions& options) {
  if (options.count == 0)
    throw std::invalid_argument("synthetic: count must be >= 1");
  if (options.hops_min == 0 || options.hops_min > options.hops_max)
    throw std::invalid_argument("synthetic: bad hop range");
  if (options.hops_max > 6)
    throw std::invalid_argument("synthetic: hops_max above 6 is not supported");
  if (options.edits_min > options.edits_max)
    throw std::invalid_argument("synthetic: bad edit range");
  if (options.fault_distractors && options.hops_min < 2)
    throw std::invalid_argument(
        "synthetic: fault distractors need hops_min >= 2");
  if (options.conflict_pairs * 2 > options.count)
    throw std::invalid_argument(
        "synthetic: not enough instances for the requested conflict pairs");

  std::mt19937 rng(options.seed);

  SyntheticResult result;
  result.dataset.name = options.name;
  result.graph = std::make_shared<FactGraph>();
  FactGraph& graph = *result.graph;
  for (const auto& def : kPool) {
    graph.add_relation({def.id, def.pattern, def.fragment});
  }

  const std::size_t conflict_reserve = options.conflict_pairs > 0 ? 1 : 0;

  for (std::size_t i = 0; i < options.count; ++i) {
    const std::string pad = pad5(i);
    const std::string id = options.name + "-" + pad;
    auto node = [&](std::size_t k) { return "n" + pad + "h" + std::to_string(k); };
    auto decoy = [&](std::size_t k, std::size_t j) {
      return "p" + pad + "h" + std::to_string(k) + "j" + std::to_string(j);
    };

    const std::size_t h = pick(rng, options.hops_min, options.hops_max);

    // Distinct relations: path first, then alias / distractor / branches.
    std::vector<std::size_t> perm(kPoolSize);
    for (std::size_t p = 0; p < kPoolSize; ++p) perm[p] = p;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> path;
    for (std::size_t k = 0; k < h; ++k) path.push_back(kPool[perm[k]].id);
    std::size_t next_rel = h;

    // The distractor must sit at an unedited hop whose child is not yet the
    // final hop, so admitting it can neither finish the chain nor stay on it.
    std::size_t fault_depth = 0;
    if (options.fault_distractors) fault_depth = pick(rng, 0, h - 2);

    std::size_t fixed = (options.alias_edits ? 1 : 0) +
                        (options.fault_distractors ? 1 : 0) + conflict_reserve;
    std::size_t edit_count = pick(rng, options.edits_min, options.edits_max);
    edit_count = std::min(edit_count, h - (options.fault_distractors ? 1 : 0));
    edit_count = std::min(edit_count, kStoreBudget - fixed);

    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < h; ++k) {
      if (options.fault_distractors && k == fault_depth) continue;
      eligible.push_back(k);
    }
    std::shuffle(eligible.begin(), eligible.end(), rng);
    eligible.resize(std::min(edit_count, eligible.size()));
    std::sort(eligible.begin(), eligible.end());
    const std::vector<std::size_t>& edited = eligible;
    auto is_edited = [&](std::size_t k) {
      return std::find(edited.begin(), edited.end(), k) != edited.end();
    };

    Instance inst;
    inst.id = id;

    // Parametric world: real triples at unedited hops; at edited hops a
    // decoy object whose own chain runs all the way to a wrong final
    // answer, so an edit-blind reader completes confidently and wrongly.
    for (std::size_t k = 0; k < h; ++k) {
      if (!is_edited(k)) {
        graph.add_triple({node(k), path[k], node(k + 1)});
        continue;
      }
      graph.add_triple({node(k), path[k], decoy(k, k + 1)});
      result.parametric_decoys[id].push_back(
          {node(k), path[k], decoy(k, k + 1)});
      for (std::size_t j = k + 1; j < h; ++j) {
        graph.add_triple({decoy(k, j), path[j], decoy(k, j + 1)});
      }

      EditedFact fact;
      fact.triple = Triple{node(k), path[k], node(k + 1)};
      fact.text = graph.templates().render(fact.triple);
      fact.source_instance = id;
      inst.edits.push_back(std::move(fact));
    }

    for (std::size_t k = 0; k < h; ++k) {
      inst.gold_chain.push_back({node(k), path[k], node(k + 1)});
    }

    if (options.alias_edits) {
      const std::string alias_rel = kPool[perm[next_rel++]].id;
      EditedFact alias;
      alias.triple = Triple{node(0), alias_rel, node(1)};
      alias.text = graph.templates().render(alias.triple);
      alias.source_instance = id;
      inst.edits.push_back(std::move(alias));
    }

    if (options.fault_distractors) {
      const std::string fault_rel = kPool[perm[next_rel++]].id;
      EditedFact distractor;
      distractor.triple = Triple{"f" + pad + "s", fault_rel, "f" + pad + "z"};
      distractor.text = graph.templates().render(distractor.triple);
      distractor.source_instance = id;
      inst.edits.push_back(std::move(distractor));
      result.fault_plans.push_back({id, fault_depth, "f" + pad + "s"});
    }

    if (options.branch_edits) {
      std::size_t slots = kStoreBudget - fixed - edited.size();
      slots = std::min(slots, kPoolSize - next_rel);
      std::vector<std::size_t> hops;
      for (std::size_t k = 0; k + 1 < h; ++k) hops.push_back(k);
      std::shuffle(hops.begin(), hops.end(), rng);
      hops.resize(std::min(slots, hops.size()));
      for (std::size_t b : hops) {
        const std::string branch_rel = kPool[perm[next_rel++]].id;
        EditedFact branch;
        branch.triple =
            Triple{node(b), branch_rel, "b" + pad + "h" + std::to_string(b)};
        branch.text = graph.templates().render(branch.triple);
        branch.source_instance = id;
        inst.edits.push_back(std::move(branch));
      }
    }

    const std::string question = graph.compose_question(node(0), path);
    graph.register_question({question, node(0), path});
    inst.questions = {question};

    inst.new_answer = node(h);
    if (edited.empty()) {
      inst.orig_answer = node(h);
    } else {
      inst.orig_answer = decoy(edited.front(), h);
    }

    auto parametric = graph.walk(node(0), path);
    if (!parametric || *parametric != inst.orig_answer)
      throw std::logic_error("synthetic: parametric walk went off-road");
    auto edited_walk = graph.walk(node(0), path, &inst.edits);
    if (!edited_walk || *edited_walk != inst.new_answer)
      throw std::logic_error("synthetic: post-edit walk missed the answer");

    result.dataset.instances.push_back(std::move(inst));
  }

  // Conflict planting: the actor gains an edit contradicting hop 0 of the
  // victim's gold chain. Only the victim becomes conflicted.
  for (std::size_t p = 0; p < options.conflict_pairs; ++p) {
    Instance& victim = result.dataset.instances[2 * p];
    Instance& actor = result.dataset.instances[2 * p + 1];
    const Triple& target = victim.gold_chain.front();

    EditedFact foreign;
    foreign.triple =
        Triple{target.subject, target.relation, "w" + pad5(2 * p)};
    foreign.text = graph.templates().render(foreign.triple);
    foreign.source_instance = actor.id;
    actor.edits.push_back(std::move(foreign));
    result.injected_conflict_ids.push_back(victim.id);
  }

  return result;
}

} // namespace kedit
