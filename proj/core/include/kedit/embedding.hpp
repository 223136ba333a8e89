#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace kedit {

// Fixed-length unit-norm sentence embedding.
struct EmbeddingVector {
  std::vector<float> values;

  std::size_t dimension() const { return values.size(); }
  double norm() const;
  bool finite() const;
  bool unit_norm(double tol = 1e-6) const;

  // Scales to unit L2 norm in place. A zero vector becomes e0.
  void normalize();
};

// Cosine distance 1 - <a, b> for unit vectors, clamped to [0, 2].
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

// Sentence embedding source. Implementations must be deterministic for a
// fixed provider and input, return unit-norm vectors, and tolerate
// concurrent calls.
class EmbeddingProvider {
public:
  virtual ~EmbeddingProvider() = default;

  virtual std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::string id() const = 0;

  EmbeddingVector embed(const std::string& text);
};

// Default offline provider: feature-hashed bag of case-folded alphanumeric
// tokens, L2-normalized. Dependency-free and deterministic across runs.
class HashingEmbeddingProvider final : public EmbeddingProvider {
public:
  explicit HashingEmbeddingProvider(std::size_t dimension = 256);

  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override;
  std::size_t dimension() const override { return dimension_; }
  std::string id() const override;

  EmbeddingVector embed_one(const std::string& text) const;

private:
  std::size_t dimension_;
};

// FNV-1a 64-bit; fully specified so embeddings never depend on the
// standard library's std::hash.
std::uint64_t fnv1a64(std::string_view s);

} // namespace kedit
