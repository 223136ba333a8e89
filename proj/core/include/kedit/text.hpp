#pragma once

// Text normalization shared by triple equality, entity matching, answer
// matching and the hashing embedding provider.

#include <string>
#include <string_view>
#include <vector>

namespace kedit {

// ASCII lowercase; bytes outside [A-Z] pass through untouched.
std::string fold_case(std::string_view s);

// Trim leading/trailing whitespace and collapse internal runs to one space.
std::string collapse_ws(std::string_view s);

// fold_case + collapse_ws: the normalization used for triple-field equality.
std::string normalize_field(std::string_view s);

// normalize_field plus stripping of leading/trailing punctuation. Entity
// names parsed out of sentences can gain or lose a trailing period
// ("Washington, D.C." vs "Washington, D.C"), so entity comparison must not
// care about edge punctuation.
std::string normalize_entity(std::string_view s);

// Lowercased alphanumeric token runs; bytes >= 0x80 count as token bytes so
// non-ASCII names survive as tokens.
std::vector<std::string> tokenize(std::string_view s);

// True when `needle` occurs in `haystack` after normalize_entity'ing both.
bool contains_normalized(std::string_view haystack, std::string_view needle);

} // namespace kedit
