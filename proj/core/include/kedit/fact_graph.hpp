#pragma once

#include "kedit/templates.hpp"
#include "kedit/triple.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kedit {

struct RelationSpec {
  std::string id;
  // Sentence pattern with {s}/{o} holes, e.g. "The capital of {s} is {o}."
  std::string pattern;
  // Noun phrase with an {x} hole used to compose nested questions,
  // e.g. "the capital of {x}".
  std::string question_fragment;
};

struct QuestionSpec {
  std::string text;
  std::string subject;
  std::vector<std::string> path; // relation ids, applied first to last
};

// A functional knowledge graph: at most one object per (subject, relation).
// Grounds the scripted oracle generator and synthetic benchmark data.
class FactGraph {
public:
  void add_relation(const RelationSpec& spec);
  // Throws std::invalid_argument when (subject, relation) already maps to a
  // different object.
  void add_triple(const Triple& triple);
  void register_question(const QuestionSpec& spec);

  const SentenceTemplates& templates() const { return templates_; }
  const std::vector<Triple>& triples() const { return triples_; }
  const std::vector<RelationSpec>& relations() const { return relations_; }
  const std::vector<QuestionSpec>& questions() const { return questions_; }

  std::optional<Triple> next_triple(const std::string& entity,
                                    const std::string& relation) const;
  const QuestionSpec* find_question(const std::string& question_text) const;

  // Maps any normalized spelling of a known entity back to its canonical
  // spelling; unknown names pass through unchanged.
  std::string canonical_entity(const std::string& name) const;

  // Nested question text for a relation path rooted at `subject`.
  std::string compose_question(const std::string& subject,
                               const std::vector<std::string>& path) const;

  // Follows `path` from `subject`; edits in `overlay` shadow graph triples
  // on matching (subject, relation). Returns the final entity, or nullopt
  // if some hop has no outgoing triple.
  std::optional<std::string> walk(
      const std::string& subject, const std::vector<std::string>& path,
      const std::vector<EditedFact>* overlay = nullptr) const;

  void save(const std::string& path) const;
  static FactGraph load(const std::string& path);

private:
  std::vector<RelationSpec> relations_;
  std::vector<Triple> triples_;
  std::vector<QuestionSpec> questions_;
  SentenceTemplates templates_;
  std::map<std::string, std::string> forward_;   // (s,r) key -> object
  std::map<std::string, std::string> canonical_; // normalized -> raw
  std::map<std::string, std::size_t> question_index_;
  void remember_entity(const std::string& name);
};

} // namespace kedit
