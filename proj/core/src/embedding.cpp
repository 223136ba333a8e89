#include "kedit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kedit/text.hpp"

namespace kedit {

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (float v : values) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

bool EmbeddingVector::finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](float v) { return std::isfinite(v); });
}

bool EmbeddingVector::unit_norm(double tol) const {
  return std::abs(norm() - 1.0) <= tol;
}

void EmbeddingVector::normalize() {
  double n = norm();
  if (n == 0.0) {
    if (!values.empty()) values[0] = 1.0f;
    return;
  }
  for (float& v : values) v = static_cast<float>(v / n);
}

double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("cosine_distance: dimension mismatch");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    dot += static_cast<double>(a.values[i]) * b.values[i];
  return std::clamp(1.0 - dot, 0.0, 2.0);
}

EmbeddingVector EmbeddingProvider::embed(const std::string& text) {
  auto out = embed_batch({text});
  return std::move(out.at(0));
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dimension)
    : dimension_(dimension) {
  if (dimension_ == 0)
    throw std::invalid_argument("embedding dimension must be positive");
}

EmbeddingVector HashingEmbeddingProvider::embed_one(
    const std::string& text) const {
  EmbeddingVector vec;
  vec.values.assign(dimension_, 0.0f);
  for (const std::string& token : tokenize(text)) {
    std::uint64_t h = fnv1a64(token);
    std::size_t bucket = static_cast<std::size_t>(h % dimension_);
    float sign = (h >> 63) ? -1.0f : 1.0f;
    vec.values[bucket] += sign;
  }
  vec.normalize();
  return vec;
}

std::vector<EmbeddingVector> HashingEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

std::string HashingEmbeddingProvider::id() const {
  return "hashing-" + std::to_string(dimension_);
}

} // namespace kedit
