#include "kedit/templates.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "kedit/text.hpp"

namespace kedit {

namespace {

bool starts_with_folded(const std::string& folded, const std::string& prefix) {
  return folded.size() >= prefix.size() &&
         folded.compare(0, prefix.size(), prefix) == 0;
}

bool ends_with_folded(const std::string& folded, const std::string& suffix) {
  return folded.size() >= suffix.size() &&
         folded.compare(folded.size() - suffix.size(), suffix.size(),
                        suffix) == 0;
}

std::string trimmed(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

} // namespace

void SentenceTemplates::add(const std::string& relation,
                            const std::string& pattern) {
  std::size_t sp = pattern.find("{s}");
  std::size_t op = pattern.find("{o}");
  if (sp == std::string::npos || op == std::string::npos || op < sp ||
      pattern.find("{s}", sp + 1) != std::string::npos ||
      pattern.find("{o}", op + 1) != std::string::npos) {
    throw std::invalid_argument("template pattern needs one {s} then one {o}: " +
                                pattern);
  }
  for (const auto& e : entries_) {
    if (e.relation == relation && e.pattern == pattern) return;
  }
  entries_.push_back({relation, pattern});

  Parts p;
  p.relation = relation;
  p.before = pattern.substr(0, sp);
  p.middle = pattern.substr(sp + 3, op - sp - 3);
  p.after = pattern.substr(op + 3);
  auto pos = std::upper_bound(
      parts_.begin(), parts_.end(), p, [](const Parts& a, const Parts& b) {
        auto len = [](const Parts& x) {
          return x.before.size() + x.middle.size() + x.after.size();
        };
        return len(a) > len(b);
      });
  parts_.insert(pos, std::move(p));
}

bool SentenceTemplates::has(const std::string& relation) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const SentenceTemplate& e) {
                       return e.relation == relation;
                     });
}

std::optional<std::string> SentenceTemplates::first_pattern(
    const std::string& relation) const {
  for (const auto& e : entries_) {
    if (e.relation == relation) return e.pattern;
  }
  return std::nullopt;
}

std::string SentenceTemplates::render(const Triple& t) const {
  for (const auto& e : entries_) {
    if (e.relation != t.relation) continue;
    std::string out = e.pattern;
    out.replace(out.find("{s}"), 3, t.subject);
    std::size_t op = out.find("{o}");
    std::string tail = out.substr(op + 3);
    // Avoid a double period when the object carries its own ("D.C.").
    if (tail == "." && !t.object.empty() && t.object.back() == '.') tail.clear();
    out = out.substr(0, op) + t.object + tail;
    return out;
  }
  throw std::out_of_range("no sentence template for relation: " + t.relation);
}

std::optional<Triple> SentenceTemplates::parse(
    const std::string& sentence) const {
  std::string folded = fold_case(sentence);
  for (const auto& p : parts_) {
    std::string fb = fold_case(p.before);
    std::string fm = fold_case(p.middle);
    std::string fa = fold_case(p.after);
    if (fm.empty()) continue;
    if (!starts_with_folded(folded, fb)) continue;
    if (!ends_with_folded(folded, fa)) {
      // A dropped final period should not make a sentence unreadable.
      if (fa != ".") continue;
      fa.clear();
    }

    std::size_t subj_begin = fb.size();
    std::size_t obj_end = folded.size() - fa.size();
    if (obj_end <= subj_begin) continue;

    std::size_t mid = folded.find(fm, subj_begin + 1);
    if (mid == std::string::npos || mid + fm.size() > obj_end) continue;

    std::string subject =
        trimmed(std::string_view(sentence).substr(subj_begin, mid - subj_begin));
    std::string object = trimmed(std::string_view(sentence)
                                     .substr(mid + fm.size(),
                                             obj_end - mid - fm.size()));
    if (subject.empty() || object.empty()) continue;
    return Triple{subject, p.relation, object};
  }
  return std::nullopt;
}

void SentenceTemplates::merge(const SentenceTemplates& other) {
  for (const auto& e : other.entries_) add(e.relation, e.pattern);
}

SentenceTemplates SentenceTemplates::defaults() {
  SentenceTemplates t;
  t.add("writer-of-novel", "The writer of the novel \"{s}\" is {o}.");
  t.add("died-in-city", "{s} died in the city of {o}.");
  t.add("in-continent", "{s} is located in the continent of {o}.");
  t.add("in-country", "{s} is located in the country of {o}.");
  t.add("capital-of", "The capital of {s} is {o}.");
  t.add("created-by", "{s} was created by {o}.");
  t.add("educated-at", "{s} was educated at {o}.");
  t.add("directed-by", "The director of \"{s}\" is {o}.");
  t.add("led-by", "{s} is led by {o}.");
  t.add("headquartered-in", "{s} is headquartered in the city of {o}.");
  t.add("citizen-of", "{s} is a citizen of {o}.");
  t.add("spouse-of", "The spouse of {s} is {o}.");
  return t;
}

std::string SentenceTemplates::pattern_from_rewrite_prompt(
    const std::string& prompt) {
  std::string p = trimmed(prompt);
  std::size_t hole = p.find("{}");
  if (hole == std::string::npos) {
    return "{s} " + p + " {o}.";
  }
  p.replace(hole, 2, "{s}");
  return p + " {o}.";
}

} // namespace kedit
