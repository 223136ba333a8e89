#include "kedit/judge.hpp"

#include "kedit/errors.hpp"
#include "kedit/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

namespace kedit {

namespace {

ConstraintKind kind_from_name(const std::string& name) {
  for (ConstraintKind kind : kAllConstraints) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown constraint name: " + name);
}

// One instruction per constraint; the judge sees it before the demos.
std::string instruction_for(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Conciseness:
      return "Decide whether the candidate step adds something new instead "
             "of repeating an earlier step. Answer yes or no.";
    case ConstraintKind::Coherence:
      return "Decide whether the candidate step follows on from the "
             "previous step (or, for a first step, from the question). "
             "Answer yes or no.";
    case ConstraintKind::Receptiveness:
      return "Decide whether the candidate step is consistent with the new "
             "knowledge listed. Answer yes or no.";
    case ConstraintKind::Pertinence:
      return "Decide whether the candidate step is relevant to the question "
             "and the reasoning so far. Answer yes or no.";
  }
  return "Answer yes or no.";
}

void append_block(std::string& out, const std::string& question,
                  std::span<const std::string> chain,
                  const std::string& candidate,
                  const std::vector<std::string>* knowledge,
                  std::optional<bool> label) {
  out += "Question: " + question + "\n";
  out += "Steps so far:";
  if (chain.empty()) {
    out += " (none)";
  } else {
    for (const auto& step : chain) out += " " + step;
  }
  out += "\n";
  if (knowledge != nullptr) {
    out += "New knowledge:";
    if (knowledge->empty()) {
      out += " (none)";
    } else {
      for (const auto& fact : *knowledge) out += " " + fact;
    }
    out += "\n";
  }
  out += "Candidate step: " + candidate + "\n";
  out += "Acceptable:";
  if (label) out += *label ? " yes" : " no";
  out += "\n";
}

} // namespace

std::vector<JudgeDemo> load_judge_demos(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read judge demos: " + path);
  nlohmann::json doc;
  in >> doc;
  if (!doc.is_array())
    throw std::runtime_error("judge demos must be a JSON array: " + path);

  std::vector<JudgeDemo> demos;
  for (const auto& item : doc) {
    JudgeDemo demo;
    demo.kind = kind_from_name(item.at("constraint").get<std::string>());
    demo.question = item.at("question").get<std::string>();
    for (const auto& step : item.value("chain", nlohmann::json::array())) {
      demo.chain.push_back(step.get<std::string>());
    }
    demo.candidate = item.at("candidate").get<std::string>();
    demo.label = item.at("label").get<bool>();
    demos.push_back(std::move(demo));
  }
  return demos;
}

std::map<ConstraintKind, std::vector<JudgeDemo>> sample_judge_demos(
    const std::vector<JudgeDemo>& all, const JudgeConfig& config) {
  std::map<ConstraintKind, std::vector<JudgeDemo>> out;
  for (ConstraintKind kind : kAllConstraints) {
    std::vector<JudgeDemo> pos, neg;
    for (const auto& demo : all) {
      if (demo.kind != kind) continue;
      (demo.label ? pos : neg).push_back(demo);
    }
    std::mt19937 rng(config.seed + static_cast<unsigned>(kind) * 1000003u);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    pos.resize(std::min(pos.size(), config.positive_demos));
    neg.resize(std::min(neg.size(), config.negative_demos));

    std::vector<JudgeDemo> picked;
    picked.insert(picked.end(), pos.begin(), pos.end());
    picked.insert(picked.end(), neg.begin(), neg.end());
    std::shuffle(picked.begin(), picked.end(), rng);
    out.emplace(kind, std::move(picked));
  }
  return out;
}

std::string build_judge_prompt(ConstraintKind kind, const VerifierContext& ctx,
                               const std::string& candidate,
                               const std::vector<JudgeDemo>& demos) {
  const bool wants_knowledge = kind == ConstraintKind::Receptiveness;

  std::string out = instruction_for(kind);
  out += "\n\n";
  for (const auto& demo : demos) {
    std::vector<std::string> demo_knowledge; // demos carry no store excerpt
    append_block(out, demo.question, demo.chain, demo.candidate,
                 wants_knowledge ? &demo_knowledge : nullptr, demo.label);
    out += "\n";
  }

  std::vector<std::string> knowledge;
  if (wants_knowledge && !ctx.store.empty()) {
    for (const auto& scored : ctx.store.retrieve_top_n(candidate, 3)) {
      knowledge.push_back(scored.fact->text);
    }
  }
  append_block(out, ctx.question, ctx.chain, candidate,
               wants_knowledge ? &knowledge : nullptr, std::nullopt);
  return out;
}

std::optional<bool> parse_yes_no(const std::string& text) {
  const std::string folded = fold_case(collapse_ws(text));
  auto bounded = [&](const std::string& word) {
    if (folded.size() < word.size()) return false;
    if (folded.compare(0, word.size(), word) != 0) return false;
    if (folded.size() == word.size()) return true;
    char next = folded[word.size()];
    return std::isalnum(static_cast<unsigned char>(next)) == 0;
  };
  if (bounded("yes")) return true;
  if (bounded("no")) return false;
  return std::nullopt;
}

JudgeVerifier::JudgeVerifier(std::shared_ptr<GeneratorBackend> backend,
                             std::vector<JudgeDemo> demos, JudgeConfig config)
    : backend_(std::move(backend)),
      demos_(sample_judge_demos(demos, config)) {}

Verdict JudgeVerifier::verify(ConstraintKind kind, const VerifierContext& ctx,
                              const std::string& candidate) {
  Verdict v;
  v.kind = kind;
  v.verifier_id = id();

  GenerationRequest request;
  request.prompt = build_judge_prompt(kind, ctx, candidate, demos_.at(kind));
  request.temperature = 0.0;
  request.stop_sequences = {"\n"};
  request.max_tokens = 8;

  for (int attempt = 0; attempt < 3; ++attempt) {
    std::string reply = backend_->complete(request);
    auto parsed = parse_yes_no(reply);
    if (parsed) {
      v.passed = *parsed;
      if (!v.passed) v.rationale = "judged unacceptable";
      return v;
    }
  }
  v.passed = false;
  v.rationale = "unparsable";
  return v;
}

} // namespace kedit
