#include "kedit/text.hpp"

#include <algorithm>
#include <cctype>

namespace kedit {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

bool is_edge_punct(unsigned char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '\'': case '(': case ')': case '[': case ']':
      return true;
    default:
      return false;
  }
}

} // namespace

std::string fold_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string normalize_field(std::string_view s) {
  return collapse_ws(fold_case(s));
}

std::string normalize_entity(std::string_view s) {
  std::string n = normalize_field(s);
  std::size_t b = 0;
  std::size_t e = n.size();
  while (b < e && (is_edge_punct(static_cast<unsigned char>(n[b])) ||
                   is_space(static_cast<unsigned char>(n[b])))) {
    ++b;
  }
  while (e > b && (is_edge_punct(static_cast<unsigned char>(n[e - 1])) ||
                   is_space(static_cast<unsigned char>(n[e - 1])))) {
    --e;
  }
  return n.substr(b, e - b);
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : s) {
    bool token_byte = std::isalnum(c) != 0 || c >= 0x80;
    if (token_byte) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

bool contains_normalized(std::string_view haystack, std::string_view needle) {
  std::string h = normalize_entity(haystack);
  std::string n = normalize_entity(needle);
  if (n.empty()) return false;
  return h.find(n) != std::string::npos;
}

} // namespace kedit
