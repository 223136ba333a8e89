#pragma once

#include "kedit/backend.hpp"
#include "kedit/embedding.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace httplib {
class Client;
}

namespace kedit {

// Append-only JSONL of provider exchanges: {"kind", "request", "response"}.
// Safe for concurrent record() calls.
class ReplayLog {
public:
  explicit ReplayLog(const std::string& path);
  void record(const std::string& kind, const nlohmann::json& request,
              const nlohmann::json& response);

private:
  std::mutex mutex_;
  std::ofstream out_;
};

// Deterministic re-run source: answers requests from a recorded log instead
// of the network. A request that was never recorded is an error, not a
// fallthrough to the network.
class ReplayPlayer {
public:
  explicit ReplayPlayer(const std::string& path);
  std::optional<nlohmann::json> lookup(const std::string& kind,
                                       const nlohmann::json& request) const;

private:
  std::map<std::string, nlohmann::json> responses_;
};

struct RemoteOptions {
  std::string url;          // e.g. http://127.0.0.1:8080/v1/complete
  std::string model;        // optional passthrough field
  std::string api_key_env;  // environment variable holding the bearer token
  int max_retries = 2;      // extra attempts after the first, 5xx/transport
  int retry_initial_ms = 50;
  std::shared_ptr<ReplayLog> log;       // record exchanges when set
  std::shared_ptr<ReplayPlayer> replay; // offline mode when set
};

// HTTP generation endpoint. Request: {"prompt", "temperature", "max_tokens",
// "stop"[, "model"]}; response: {"text"}. Temperature is pinned to 0
// regardless of the incoming request. The API key is read from the
// environment only (never from config files); it is required unless running
// from a replay. Retries transport errors and 5xx with exponential backoff.
class RemoteGeneratorBackend final : public GeneratorBackend {
public:
  explicit RemoteGeneratorBackend(RemoteOptions options);
  ~RemoteGeneratorBackend() override;

  std::string complete(const GenerationRequest& request) override;
  std::string id() const override;

private:
  RemoteOptions options_;
  std::string host_;
  std::string path_;
  std::string api_key_;
  std::mutex mutex_; // httplib clients are not safe for concurrent requests
  std::unique_ptr<httplib::Client> client_;
};

// HTTP embedding endpoint. Request: {"texts": [...]}; response:
// {"vectors": [[...], ...]}. Vectors are checked for the configured
// dimension and finiteness and re-normalized on receipt.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
  RemoteEmbeddingProvider(RemoteOptions options, std::size_t dimension);
  ~RemoteEmbeddingProvider() override;

  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override;
  std::size_t dimension() const override { return dimension_; }
  std::string id() const override;

private:
  RemoteOptions options_;
  std::string host_;
  std::string path_;
  std::string api_key_;
  std::size_t dimension_;
  std::mutex mutex_;
  std::unique_ptr<httplib::Client> client_;
};

} // namespace kedit
