#include "kedit/prompt.hpp"

#include "kedit/text.hpp"

namespace kedit {

const std::array<std::string, 3>& generation_exemplars() {
  static const std::array<std::string, 3> exemplars = {
      "Question: What is the capital of the country where Plainfield Town "
      "Hall is located?\n"
      "Thoughts with New Knowledge: Plainfield Town Hall is located in the "
      "country of the United States of America.# The capital of United "
      "States is Washington, D.C.# Washington, D.C. is the answer.\n"
      "Answer: Washington, D.C.",

      "Question: In which country is the company that created Nissan 200SX "
      "located?\n"
      "Thoughts with New Knowledge: Nissan 200SX was created by Nissan.# "
      "Nissan is located in the country of Japan.# Japan is the answer.\n"
      "Answer: Japan",

      "Question: Which continent is the country where the director of \"My "
      "House Husband: Ikaw Na!\" was educated located in?\n"
      "Thoughts with New Knowledge: The director of \"My House Husband: "
      "Ikaw Na!\" is Jose Javier Reyes.# Jose Javier Reyes was educated at "
      "De La Salle University.# De La Salle University is located in the "
      "country of Philippines.# Philippines is located in the continent if "
      "Asia.# Asia is the answer.\n"
      "Answer: Asia",
  };
  return exemplars;
}

std::string render_generation_prompt(const std::string& question,
                                     const std::vector<std::string>& chain) {
  std::string out;
  for (const auto& ex : generation_exemplars()) {
    out += ex;
    out += "\n\n";
  }
  out += "Question: ";
  out += question;
  out += "\nThoughts with New Knowledge: ";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out += chain[i];
    out += "# ";
  }
  return out;
}

const std::vector<std::string>& step_stop_sequences() {
  static const std::vector<std::string> stops = {"#", "\n"};
  return stops;
}

namespace {

std::string strip_trailing_sentence_punct(std::string s) {
  while (!s.empty()) {
    char c = s.back();
    if (c == '.' || c == '!' || c == '?' || c == ' ' || c == '\t') {
      s.pop_back();
    } else {
      break;
    }
  }
  return s;
}

bool iends_with(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return fold_case(s.substr(s.size() - suffix.size())) == fold_case(suffix);
}

} // namespace

std::optional<std::string> extract_answer(const std::string& step) {
  const std::string s = collapse_ws(step);
  if (s.empty()) return std::nullopt;

  static const std::string kSuffix = " is the answer";
  const std::string trimmed = strip_trailing_sentence_punct(s);
  if (iends_with(trimmed, kSuffix)) {
    std::string head =
        collapse_ws(trimmed.substr(0, trimmed.size() - kSuffix.size()));
    if (!head.empty()) return head;
  }

  static const std::string kPrefix = "answer:";
  if (s.size() > kPrefix.size() &&
      fold_case(s.substr(0, kPrefix.size())) == kPrefix) {
    std::string rest = collapse_ws(s.substr(kPrefix.size()));
    if (!rest.empty()) return rest;
  }
  return std::nullopt;
}

std::string render_terminal_answer(const std::string& answer) {
  return answer + " is the answer.";
}

} // namespace kedit
