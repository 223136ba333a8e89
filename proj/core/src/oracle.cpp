#include "kedit/oracle.hpp"

#include "kedit/errors.hpp"
#include "kedit/prompt.hpp"
#include "kedit/text.hpp"

#include <vector>

namespace kedit {

namespace {

constexpr const char* kQuestionMarker = "Question: ";
constexpr const char* kChainMarker = "Thoughts with New Knowledge: ";

// Pulls the live question and partial chain out of the prompt: the last
// "Question:" line is the one under evaluation, everything after it on the
// following "Thoughts with New Knowledge:" line is the chain so far.
struct ParsedPrompt {
  std::string question;
  std::vector<std::string> chain;
};

ParsedPrompt parse_prompt(const std::string& prompt) {
  auto q_pos = prompt.rfind(kQuestionMarker);
  if (q_pos == std::string::npos) {
    throw ProviderError("oracle: prompt has no question line", false);
  }
  auto q_begin = q_pos + std::string(kQuestionMarker).size();
  auto q_end = prompt.find('\n', q_begin);
  if (q_end == std::string::npos) {
    throw ProviderError("oracle: prompt truncated after question", false);
  }

  auto c_pos = prompt.find(kChainMarker, q_end);
  if (c_pos == std::string::npos) {
    throw ProviderError("oracle: prompt has no chain line", false);
  }
  auto c_begin = c_pos + std::string(kChainMarker).size();
  auto c_end = prompt.find('\n', c_begin);
  if (c_end == std::string::npos) c_end = prompt.size();

  ParsedPrompt parsed;
  parsed.question = collapse_ws(prompt.substr(q_begin, q_end - q_begin));
  std::string chain_text = prompt.substr(c_begin, c_end - c_begin);
  std::size_t start = 0;
  while (start <= chain_text.size()) {
    auto sep = chain_text.find('#', start);
    std::string piece = collapse_ws(
        chain_text.substr(start, sep == std::string::npos ? std::string::npos
                                                          : sep - start));
    if (!piece.empty()) parsed.chain.push_back(std::move(piece));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return parsed;
}

} // namespace

OracleBackend::OracleBackend(std::shared_ptr<const FactGraph> graph)
    : graph_(std::move(graph)) {}

void OracleBackend::arm_hallucination(int depth, std::string sentence) {
  std::lock_guard<std::mutex> lock(fault_mutex_);
  fault_depth_ = depth;
  fault_sentence_ = std::move(sentence);
}

std::string OracleBackend::complete(const GenerationRequest& request) {
  ParsedPrompt parsed = parse_prompt(request.prompt);

  const QuestionSpec* spec = graph_->find_question(parsed.question);
  if (spec == nullptr) {
    throw ProviderError(
        "oracle: question is not registered in the graph: " + parsed.question,
        false);
  }

  const std::size_t position = parsed.chain.size();

  {
    std::lock_guard<std::mutex> lock(fault_mutex_);
    if (fault_depth_ && position == static_cast<std::size_t>(*fault_depth_)) {
      fault_depth_.reset();
      return fault_sentence_;
    }
  }

  // Entity reached so far: the question's subject before any step, else the
  // object of the last chain step (whatever its sentence form).
  std::string entity;
  if (position == 0) {
    entity = spec->subject;
  } else {
    auto last = graph_->templates().parse(parsed.chain.back());
    if (!last) return ""; // can't continue from an unparsable step
    entity = graph_->canonical_entity(last->object);
  }

  if (position >= spec->path.size()) {
    return render_terminal_answer(entity);
  }

  auto next = graph_->next_triple(entity, spec->path[position]);
  if (!next) return ""; // nothing known: dead end
  return graph_->templates().render(*next);
}

} // namespace kedit
