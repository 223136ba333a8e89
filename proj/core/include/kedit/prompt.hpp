#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace kedit {

// The three fixed few-shot exemplars of the generation prompt. Reasoning
// steps inside an exemplar are separated by "#" and the chain ends with
// "<X> is the answer." followed by an "Answer:" line.
const std::array<std::string, 3>& generation_exemplars();

// Full generation prompt: the three exemplars, then
// "Question: {question}\nThoughts with New Knowledge: {chain joined by '# '}"
// so the backend continues with the next step. A nonempty chain gets a
// trailing "# " so the completion starts at a fresh step.
std::string render_generation_prompt(const std::string& question,
                                     const std::vector<std::string>& chain);

// Stop sequences for step-granular decoding; one call yields one step.
const std::vector<std::string>& step_stop_sequences();

// "<X> is the answer" (case-insensitive, trailing punctuation ignored)
// yields X; a leading "Answer:" yields the remainder; anything else is
// std::nullopt. Internal punctuation survives ("Washington, D.C.").
std::optional<std::string> extract_answer(const std::string& step);

// Terminal step rendering, the inverse of extract_answer.
std::string render_terminal_answer(const std::string& answer);

} // namespace kedit
