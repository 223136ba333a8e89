#pragma once

#include "kedit/backend.hpp"
#include "kedit/constraints.hpp"
#include "kedit/embedding.hpp"
#include "kedit/remote.hpp"
#include "kedit/search.hpp"

#include <memory>
#include <optional>
#include <string>

namespace kedit {

struct BackendConfig {
  std::string kind = "oracle"; // oracle | remote
  std::string url;             // remote only
  std::string model;           // remote only, optional
  std::string graph_path;      // oracle only
};

struct EmbeddingConfig {
  std::string kind = "hashing"; // hashing | remote
  std::string url;              // remote only
  std::size_t dimension = 256;
};

struct VerifierConfig {
  std::string kind = "rules"; // rules | judge
  std::string demos_path;     // judge only
  unsigned seed = 7;
  std::size_t positive_demos = 2;
  std::size_t negative_demos = 2;
};

// Everything a run needs. Config files are JSON with the same nesting;
// precedence is flags > file > defaults. API keys are intentionally not
// representable here: they come from GENERATOR_API_KEY / EMBEDDING_API_KEY.
struct Config {
  BackendConfig backend;
  EmbeddingConfig embedding;
  VerifierConfig verifier;
  SearchLimits limits; // retrieval_n 5, d_max 8, node_budget 200
  std::optional<std::size_t> batch_size = 100; // nullopt: one full batch
  std::optional<unsigned> shuffle_seed;
  std::size_t parallelism = 1;
  bool early_stop = true;
  bool stable_output = false;
  std::string output_dir = "out";
  std::string record_path; // write a replay log here
  std::string replay_path; // answer providers from this log (offline)

  // Overlays a JSON config file. Unknown keys and api keys anywhere in the
  // file are ConfigErrors naming the offending key.
  void apply_file(const std::string& path);

  // Field-level sanity; throws ConfigError naming the offending field.
  void validate() const;
};

struct Providers {
  std::shared_ptr<GeneratorBackend> generator;
  std::shared_ptr<EmbeddingProvider> embedding;
  std::shared_ptr<ReplayLog> log;       // set when record_path is configured
  std::shared_ptr<ReplayPlayer> replay; // set when replay_path is configured
};

// Instantiates backend + embedding per config. The oracle backend requires
// backend.graph_path; remote pieces require their URLs.
Providers make_providers(const Config& config);

// The verifier per config; the judge wraps the given generator backend.
std::shared_ptr<ConstraintVerifier> make_verifier(
    const Config& config, std::shared_ptr<GeneratorBackend> backend,
    const SentenceTemplates& templates);

} // namespace kedit
