#include "kedit/triple.hpp"

#include <stdexcept>

#include "kedit/text.hpp"

namespace kedit {

Triple Triple::normalized() const {
  return Triple{normalize_entity(subject), normalize_entity(relation),
                normalize_entity(object)};
}

bool Triple::operator==(const Triple& other) const {
  Triple a = normalized();
  Triple b = other.normalized();
  return a.subject == b.subject && a.relation == b.relation &&
         a.object == b.object;
}

bool Triple::same_subject_relation(const Triple& other) const {
  return normalize_entity(subject) == normalize_entity(other.subject) &&
         normalize_entity(relation) == normalize_entity(other.relation);
}

std::string Triple::subject_relation_key() const {
  return normalize_entity(subject) + '\x1f' + normalize_entity(relation);
}

void validate_triple(const Triple& t) {
  Triple n = t.normalized();
  if (n.subject.empty())
    throw std::invalid_argument("triple subject empty after normalization");
  if (n.relation.empty())
    throw std::invalid_argument("triple relation empty after normalization");
  if (n.object.empty())
    throw std::invalid_argument("triple object empty after normalization");
}

bool EditedFact::text_mentions_entities() const {
  return contains_normalized(text, triple.subject) &&
         contains_normalized(text, triple.object);
}

} // namespace kedit
