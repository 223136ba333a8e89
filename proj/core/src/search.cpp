#include "kedit/search.hpp"

#include "kedit/errors.hpp"
#include "kedit/prompt.hpp"
#include "kedit/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>

namespace kedit {

void SearchLimits::validate() const {
  if (retrieval_n == 0) throw ConfigError("limits.retrieval_n must be >= 1");
  if (d_max == 0) throw ConfigError("limits.d_max must be >= 1");
  if (node_budget == 0) throw ConfigError("limits.node_budget must be >= 1");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Answered: return "answered";
    case Termination::Exhausted: return "exhausted";
    case Termination::BudgetExceeded: return "budget-exceeded";
    case Termination::DepthLimited: return "depth-limited";
  }
  return "?";
}

std::vector<Candidate> propose(const std::string& question,
                               const std::vector<std::string>& chain,
                               const KnowledgeStore& store,
                               GeneratorBackend& backend,
                               ConstraintVerifier& verifier,
                               const SearchLimits& limits,
                               SearchTotals& totals, bool& dead_end) {
  GeneratedStep step = generate_step(backend, question, chain);
  totals.generator_calls += static_cast<std::size_t>(step.backend_calls);
  dead_end = !step.text.has_value();

  std::vector<Candidate> candidates;
  if (step.text) {
    Candidate c;
    c.text = *step.text;
    c.source = SourceKind::Parametric;
    candidates.push_back(std::move(c));
  }

  if (!store.empty()) {
    const std::string& query = chain.empty() ? question : chain.back();
    for (const auto& scored : store.retrieve_top_n(query, limits.retrieval_n)) {
      Candidate c;
      c.text = scored.fact->text;
      c.source = SourceKind::Edited;
      c.distance = scored.distance;
      c.fact_triple = scored.fact->triple;
      c.fact_source_instance = scored.fact->source_instance;
      candidates.push_back(std::move(c));
    }
  }

  // Dedup by normalized text; an edited fact beats the parametric step and
  // the closest edited fact beats farther duplicates.
  std::vector<Candidate> unique;
  std::map<std::string, std::size_t> seen;
  for (auto& c : candidates) {
    const std::string key = normalize_field(c.text);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, unique.size());
      unique.push_back(std::move(c));
    } else if (unique[it->second].source == SourceKind::Parametric &&
               c.source == SourceKind::Edited) {
      unique[it->second] = std::move(c);
    }
  }

  for (auto& c : unique) {
    VerifierContext ctx{question, std::span<const std::string>(chain), store};
    VerdictSet set = verify_all(verifier, ctx, c.text);
    totals.verifier_calls += set.executed;
    for (const auto& verdict : set.verdicts) {
      if (!verdict.skipped && verdict.rationale == "unparsable") {
        ++totals.unparsable_incidents;
      }
    }
    c.verdicts = std::move(set.verdicts);
    c.valid = set.valid;
  }
  return unique;
}

std::vector<std::size_t> rank_valid(const std::vector<Candidate>& candidates) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].valid) order.push_back(i);
  }
  auto key = [&](std::size_t i) {
    const Candidate& c = candidates[i];
    const int source_rank = c.source == SourceKind::Edited ? 0 : 1;
    const double distance =
        c.distance.value_or(std::numeric_limits<double>::infinity());
    return std::make_tuple(source_rank, distance, std::cref(c.text));
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  return order;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

struct Expansion {
  std::size_t record = 0;
  std::vector<std::size_t> ranked;
};

Expansion expand_node(const std::string& question,
                      const std::vector<std::string>& chain,
                      const KnowledgeStore& store, GeneratorBackend& backend,
                      ConstraintVerifier& verifier, const SearchLimits& limits,
                      SearchTrace& trace) {
  IterationRecord rec;
  rec.chain = chain;
  bool dead_end = false;
  rec.candidates = propose(question, chain, store, backend, verifier, limits,
                           trace.totals, dead_end);
  rec.generator_dead_end = dead_end;
  if (dead_end) rec.events.push_back("generator-dead-end");

  Expansion exp;
  exp.ranked = rank_valid(rec.candidates);
  ++trace.totals.expansions;
  exp.record = trace.iterations.size();
  trace.iterations.push_back(std::move(rec));
  return exp;
}

} // namespace

Outcome dfs(const std::string& question, const KnowledgeStore& store,
            GeneratorBackend& backend, ConstraintVerifier& verifier,
            const SearchLimits& limits, const DfsOptions& options) {
  limits.validate();
  const auto start = Clock::now();

  Outcome out;
  SearchTrace& trace = out.trace;

  struct Node {
    std::vector<std::string> chain;
    std::vector<std::size_t> ranked;
    std::size_t cursor = 0;
    std::size_t record = 0;
  };

  std::vector<Node> stack;
  {
    Expansion root =
        expand_node(question, {}, store, backend, verifier, limits, trace);
    stack.push_back(Node{{}, std::move(root.ranked), 0, root.record});
  }

  std::optional<std::string> first_answer;
  bool depth_limited = false;
  bool budget_hit = false;

  while (!stack.empty()) {
    Node& node = stack.back();
    const std::size_t rec_idx = node.record;

    if (node.cursor >= node.ranked.size()) {
      stack.pop_back();
      if (!stack.empty()) {
        ++trace.totals.backtracks;
        trace.iterations[stack.back().record].events.push_back("backtrack");
      }
      continue;
    }

    const std::size_t choice = node.ranked[node.cursor++];
    trace.iterations[rec_idx].choices.push_back(choice);
    const Candidate& cand = trace.iterations[rec_idx].candidates[choice];

    if (auto answer = extract_answer(cand.text)) {
      trace.iterations[rec_idx].events.push_back("answer-found");
      if (!first_answer) first_answer = std::move(answer);
      if (options.early_stop) break;
      continue; // exhaustive mode: keep exploring siblings
    }

    std::vector<std::string> child_chain = node.chain;
    child_chain.push_back(cand.text);
    if (child_chain.size() >= limits.d_max) {
      // A non-terminal step at the depth cap cannot lead anywhere.
      trace.iterations[rec_idx].events.push_back("depth-limit");
      depth_limited = true;
      continue;
    }
    if (trace.totals.expansions >= limits.node_budget) {
      trace.iterations[rec_idx].events.push_back("budget-exhausted");
      budget_hit = true;
      break;
    }
    Expansion child = expand_node(question, child_chain, store, backend,
                                  verifier, limits, trace);
    stack.push_back(
        Node{std::move(child_chain), std::move(child.ranked), 0, child.record});
  }

  trace.totals.wall_ms = elapsed_ms(start);
  if (first_answer) {
    out.answer = std::move(first_answer);
    out.termination = Termination::Answered;
  } else if (budget_hit) {
    out.termination = Termination::BudgetExceeded;
  } else if (depth_limited) {
    out.termination = Termination::DepthLimited;
  } else {
    out.termination = Termination::Exhausted;
  }
  return out;
}

Outcome bfs(const std::string& question, const KnowledgeStore& store,
            GeneratorBackend& backend, ConstraintVerifier& verifier,
            const SearchLimits& limits) {
  limits.validate();
  const auto start = Clock::now();

  Outcome out;
  SearchTrace& trace = out.trace;

  std::vector<std::vector<std::string>> frontier = {{}};
  bool depth_limited = false;
  bool budget_hit = false;
  std::optional<std::string> answer;

  while (!frontier.empty() && !answer && !budget_hit) {
    std::vector<std::vector<std::string>> next;
    for (const auto& chain : frontier) {
      if (trace.totals.expansions >= limits.node_budget) {
        budget_hit = true;
        break;
      }
      Expansion exp = expand_node(question, chain, store, backend, verifier,
                                  limits, trace);
      IterationRecord& rec = trace.iterations[exp.record];
      for (std::size_t idx : exp.ranked) {
        rec.choices.push_back(idx);
        const Candidate& cand = rec.candidates[idx];
        if (auto found = extract_answer(cand.text)) {
          rec.events.push_back("answer-found");
          answer = std::move(found);
          break;
        }
        std::vector<std::string> child = chain;
        child.push_back(cand.text);
        if (child.size() >= limits.d_max) {
          rec.events.push_back("depth-limit");
          depth_limited = true;
          continue;
        }
        next.push_back(std::move(child));
      }
      if (answer) break;
    }
    frontier = std::move(next);
  }

  trace.totals.wall_ms = elapsed_ms(start);
  if (answer) {
    out.answer = std::move(answer);
    out.termination = Termination::Answered;
  } else if (budget_hit) {
    out.termination = Termination::BudgetExceeded;
  } else if (depth_limited) {
    out.termination = Termination::DepthLimited;
  } else {
    out.termination = Termination::Exhausted;
  }
  return out;
}

Outcome mello(const std::string& question, const KnowledgeStore& store,
              GeneratorBackend& backend, const SentenceTemplates& templates,
              const SearchLimits& limits) {
  limits.validate();
  const auto start = Clock::now();

  Outcome out;
  SearchTrace& trace = out.trace;
  std::vector<std::string> chain;

  while (chain.size() < limits.d_max) {
    if (trace.totals.expansions >= limits.node_budget) {
      trace.totals.wall_ms = elapsed_ms(start);
      out.termination = Termination::BudgetExceeded;
      return out;
    }

    IterationRecord rec;
    rec.chain = chain;
    ++trace.totals.expansions;

    GeneratedStep step = generate_step(backend, question, chain);
    trace.totals.generator_calls += static_cast<std::size_t>(step.backend_calls);
    if (!step.text) {
      rec.generator_dead_end = true;
      rec.events.push_back("generator-dead-end");
      trace.iterations.push_back(std::move(rec));
      trace.totals.wall_ms = elapsed_ms(start);
      out.termination = Termination::Exhausted;
      return out;
    }

    Candidate generated;
    generated.text = *step.text;
    generated.source = SourceKind::Parametric;
    rec.candidates.push_back(std::move(generated));

    std::size_t chosen = 0;
    if (!store.empty()) {
      auto scored = store.retrieve_top_n(*step.text, 1);
      if (!scored.empty()) {
        Candidate fact;
        fact.text = scored[0].fact->text;
        fact.source = SourceKind::Edited;
        fact.distance = scored[0].distance;
        fact.fact_triple = scored[0].fact->triple;
        fact.fact_source_instance = scored[0].fact->source_instance;
        rec.candidates.push_back(std::move(fact));

        // Take the retrieved fact only when it contradicts the generated
        // step on the same (subject, relation).
        auto parsed = templates.parse(*step.text);
        if (parsed &&
            scored[0].fact->triple.same_subject_relation(*parsed) &&
            normalize_entity(scored[0].fact->triple.object) !=
                normalize_entity(parsed->object)) {
          chosen = 1;
          rec.events.push_back("fact-override");
        }
      }
    }

    rec.choices.push_back(chosen);
    const std::string taken = rec.candidates[chosen].text;
    trace.iterations.push_back(std::move(rec));
    chain.push_back(taken);

    if (auto answer = extract_answer(taken)) {
      trace.iterations.back().events.push_back("answer-found");
      trace.totals.wall_ms = elapsed_ms(start);
      out.answer = std::move(answer);
      out.termination = Termination::Answered;
      return out;
    }
  }

  trace.totals.wall_ms = elapsed_ms(start);
  out.termination = Termination::DepthLimited;
  return out;
}

Outcome parametric_only(const std::string& question, GeneratorBackend& backend,
                        const SearchLimits& limits) {
  limits.validate();
  const auto start = Clock::now();

  Outcome out;
  SearchTrace& trace = out.trace;
  std::vector<std::string> chain;

  while (chain.size() < limits.d_max) {
    IterationRecord rec;
    rec.chain = chain;
    ++trace.totals.expansions;

    GeneratedStep step = generate_step(backend, question, chain);
    trace.totals.generator_calls += static_cast<std::size_t>(step.backend_calls);
    if (!step.text) {
      rec.generator_dead_end = true;
      rec.events.push_back("generator-dead-end");
      trace.iterations.push_back(std::move(rec));
      trace.totals.wall_ms = elapsed_ms(start);
      out.termination = Termination::Exhausted;
      return out;
    }

    Candidate generated;
    generated.text = *step.text;
    generated.source = SourceKind::Parametric;
    rec.candidates.push_back(std::move(generated));
    rec.choices.push_back(0);
    trace.iterations.push_back(std::move(rec));
    chain.push_back(*step.text);

    if (auto answer = extract_answer(*step.text)) {
      trace.iterations.back().events.push_back("answer-found");
      trace.totals.wall_ms = elapsed_ms(start);
      out.answer = std::move(answer);
      out.termination = Termination::Answered;
      return out;
    }
  }

  trace.totals.wall_ms = elapsed_ms(start);
  out.termination = Termination::DepthLimited;
  return out;
}

namespace {

nlohmann::json verdict_to_json(const Verdict& v) {
  return {{"constraint", to_string(v.kind)},
          {"passed", v.passed},
          {"skipped", v.skipped},
          {"rationale", v.rationale},
          {"verifier", v.verifier_id}};
}

nlohmann::json candidate_to_json(const Candidate& c) {
  nlohmann::json j{{"text", c.text},
                   {"source", c.source == SourceKind::Edited ? "edited"
                                                             : "parametric"},
                   {"valid", c.valid}};
  if (c.distance) j["distance"] = *c.distance;
  if (c.fact_triple) {
    j["fact"] = {{"subject", c.fact_triple->subject},
                 {"relation", c.fact_triple->relation},
                 {"object", c.fact_triple->object}};
  }
  if (!c.fact_source_instance.empty())
    j["fact_source"] = c.fact_source_instance;
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : c.verdicts) j["verdicts"].push_back(verdict_to_json(v));
  return j;
}

} // namespace

nlohmann::json trace_to_json(const SearchTrace& trace) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const auto& rec : trace.iterations) {
    nlohmann::json j{{"chain", rec.chain},
                     {"generator_dead_end", rec.generator_dead_end},
                     {"choices", rec.choices},
                     {"events", rec.events}};
    j["candidates"] = nlohmann::json::array();
    for (const auto& c : rec.candidates)
      j["candidates"].push_back(candidate_to_json(c));
    iterations.push_back(std::move(j));
  }
  return {{"iterations", std::move(iterations)},
          {"totals",
           {{"expansions", trace.totals.expansions},
            {"generator_calls", trace.totals.generator_calls},
            {"verifier_calls", trace.totals.verifier_calls},
            {"backtracks", trace.totals.backtracks},
            {"unparsable_incidents", trace.totals.unparsable_incidents},
            {"wall_ms", trace.totals.wall_ms}}}};
}

} // namespace kedit
