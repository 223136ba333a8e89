#pragma once

#include <string>
#include <string_view>

namespace kedit {

// (subject, relation, object) fact atom. Equality is defined on the
// normalized fields so dataset strings that differ only in casing or
// whitespace compare equal.
struct Triple {
  std::string subject;
  std::string relation;
  std::string object;

  Triple normalized() const;

  bool operator==(const Triple& other) const;
  bool operator!=(const Triple& other) const { return !(*this == other); }

  // Same (subject, relation) after normalization.
  bool same_subject_relation(const Triple& other) const;

  // Normalized "subject\x1frelation" key, usable as a map key.
  std::string subject_relation_key() const;
};

// Throws std::invalid_argument when any field is empty after normalization.
void validate_triple(const Triple& t);

// A triple plus its natural-language rendering and the instance that
// contributed it. The embedding is filled in at store build.
struct EditedFact {
  Triple triple;
  std::string text;
  std::string source_instance;

  // True when `text` mentions both subject and object (load-time check;
  // a violation is reported as a warning, not an error).
  bool text_mentions_entities() const;
};

} // namespace kedit
