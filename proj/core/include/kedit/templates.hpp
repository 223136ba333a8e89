#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kedit/triple.hpp"

namespace kedit {

// One declarative phrasing of a relation: a pattern with "{s}" and "{o}"
// placeholders, subject first. A relation may carry several patterns;
// the first registered one is used for rendering.
struct SentenceTemplate {
  std::string relation;
  std::string pattern;
};

// Registry of triple phrasings. Rendering turns a Triple into a sentence;
// parsing inverts any registered pattern back into a Triple. Parsing is the
// basis of the rule verifiers and the oracle backend, so every sentence this
// project renders (synthetic facts, dataset edit renderings, oracle steps)
// goes through here.
class SentenceTemplates {
public:
  // Pattern must contain exactly one "{s}" and one "{o}", subject first.
  void add(const std::string& relation, const std::string& pattern);

  bool has(const std::string& relation) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<SentenceTemplate>& entries() const { return entries_; }

  // The rendering pattern (first registered) for a relation, if any.
  std::optional<std::string> first_pattern(const std::string& relation) const;

  // Throws std::out_of_range when no pattern is registered for the relation.
  std::string render(const Triple& t) const;

  // Tries patterns most-specific first; spans are matched case-insensitively
  // and entity text is taken from the original sentence.
  std::optional<Triple> parse(const std::string& sentence) const;

  void merge(const SentenceTemplates& other);

  // Relation phrasings for the fixture worlds used across tests and docs
  // (capitals, countries, continents, authorship, ...).
  static SentenceTemplates defaults();

  // Converts a dataset rewrite prompt ("The capital of {} is") into a
  // pattern ("The capital of {s} is {o}.").
  static std::string pattern_from_rewrite_prompt(const std::string& prompt);

private:
  struct Parts {
    std::string relation;
    std::string before;  // literal before {s}
    std::string middle;  // literal between {s} and {o}
    std::string after;   // literal after {o}
  };

  std::vector<SentenceTemplate> entries_;
  std::vector<Parts> parts_;  // sorted by descending literal length
};

} // namespace kedit
