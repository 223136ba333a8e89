#include "kedit/remote.hpp"

#include "kedit/errors.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace kedit {

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos)
    throw ConfigError("remote url needs a scheme: " + url);
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string require_api_key(const RemoteOptions& options) {
  if (options.replay) return ""; // offline: no credentials touched
  if (options.api_key_env.empty()) return "";
  const char* value = std::getenv(options.api_key_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigError("environment variable " + options.api_key_env +
                      " is not set (api keys come from the environment, "
                      "never the config file)");
  }
  return value;
}

std::unique_ptr<httplib::Client> make_client(const std::string& host) {
  auto client = std::make_unique<httplib::Client>(host);
  client->set_connection_timeout(10, 0);
  client->set_read_timeout(60, 0);
  client->set_write_timeout(10, 0);
  return client;
}

nlohmann::json post_with_retries(httplib::Client& client,
                                 const std::string& path,
                                 const std::string& api_key,
                                 const nlohmann::json& body,
                                 const RemoteOptions& options,
                                 const char* what) {
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

  int delay_ms = options.retry_initial_ms;
  std::string last_error;
  for (int attempt = 0;; ++attempt) {
    auto res = client.Post(path, headers, payload, "application/json");
    if (res) {
      if (res->status >= 200 && res->status < 300) {
        try {
          return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
          throw ProviderError(std::string(what) + ": response is not JSON: " +
                                  e.what(),
                              false);
        }
      }
      if (res->status < 500) {
        throw ProviderError(std::string(what) + ": HTTP " +
                                std::to_string(res->status) + ": " + res->body,
                            false);
      }
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      last_error = "transport error " + std::to_string(static_cast<int>(res.error()));
    }
    if (attempt >= options.max_retries) {
      throw ProviderError(std::string(what) + ": " + last_error + " after " +
                              std::to_string(attempt + 1) + " attempts",
                          true);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    delay_ms *= 2;
  }
}

std::string replay_key(const std::string& kind, const nlohmann::json& request) {
  return kind + '\x1f' + request.dump();
}

} // namespace

ReplayLog::ReplayLog(const std::string& path) : out_(path, std::ios::trunc) {
  if (!out_) throw ConfigError("cannot open replay log for writing: " + path);
}

void ReplayLog::record(const std::string& kind, const nlohmann::json& request,
                       const nlohmann::json& response) {
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << nlohmann::json{{"kind", kind},
                         {"request", request},
                         {"response", response}}
              .dump()
       << '\n';
  out_.flush();
}

ReplayPlayer::ReplayPlayer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read replay log: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json entry = nlohmann::json::parse(line);
    responses_[replay_key(entry.at("kind").get<std::string>(),
                          entry.at("request"))] = entry.at("response");
  }
}

std::optional<nlohmann::json> ReplayPlayer::lookup(
    const std::string& kind, const nlohmann::json& request) const {
  auto it = responses_.find(replay_key(kind, request));
  if (it == responses_.end()) return std::nullopt;
  return std::optional<nlohmann::json>(std::in_place, it->second);
}

RemoteGeneratorBackend::RemoteGeneratorBackend(RemoteOptions options)
    : options_(std::move(options)) {
  std::tie(host_, path_) = split_url(options_.url);
  api_key_ = require_api_key(options_);
  if (!options_.replay) client_ = make_client(host_);
}

RemoteGeneratorBackend::~RemoteGeneratorBackend() = default;

std::string RemoteGeneratorBackend::id() const {
  return "remote-generator:" +
         (options_.model.empty() ? host_ : options_.model);
}

std::string RemoteGeneratorBackend::complete(const GenerationRequest& request) {
  nlohmann::json body{{"prompt", request.prompt},
                      {"temperature", 0.0}, // pinned: the search needs greedy
                      {"max_tokens", request.max_tokens},
                      {"stop", request.stop_sequences}};
  if (!options_.model.empty()) body["model"] = options_.model;

  nlohmann::json response;
  if (options_.replay) {
    auto found = options_.replay->lookup("generate", body);
    if (!found) {
      throw ProviderError(
          "replay log has no response for this generation request", false);
    }
    response = std::move(*found);
  } else {
    std::lock_guard<std::mutex> lock(mutex_);
    response = post_with_retries(*client_, path_, api_key_, body, options_,
                                 "generator");
  }
  if (options_.log) options_.log->record("generate", body, response);

  if (!response.contains("text") || !response["text"].is_string()) {
    throw ProviderError("generator response has no \"text\" field", false);
  }
  return response["text"].get<std::string>();
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteOptions options,
                                                 std::size_t dimension)
    : options_(std::move(options)), dimension_(dimension) {
  if (dimension_ == 0)
    throw ConfigError("embedding.dimension must be >= 1 for remote providers");
  std::tie(host_, path_) = split_url(options_.url);
  api_key_ = require_api_key(options_);
  if (!options_.replay) client_ = make_client(host_);
}

RemoteEmbeddingProvider::~RemoteEmbeddingProvider() = default;

std::string RemoteEmbeddingProvider::id() const {
  return "remote-embedding:" + host_;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  nlohmann::json body{{"texts", texts}};

  nlohmann::json response;
  if (options_.replay) {
    auto found = options_.replay->lookup("embed", body);
    if (!found) {
      throw ProviderError(
          "replay log has no response for this embedding request", false);
    }
    response = std::move(*found);
  } else {
    std::lock_guard<std::mutex> lock(mutex_);
    response = post_with_retries(*client_, path_, api_key_, body, options_,
                                 "embedder");
  }
  if (options_.log) options_.log->record("embed", body, response);

  if (!response.contains("vectors") || !response["vectors"].is_array() ||
      response["vectors"].size() != texts.size()) {
    throw ProviderError("embedding response must carry one vector per text",
                        false);
  }

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& row : response["vectors"]) {
    EmbeddingVector v;
    v.values.reserve(row.size());
    for (const auto& x : row) {
      if (!x.is_number())
        throw ProviderError("embedding vector has a non-numeric entry", false);
      v.values.push_back(x.get<float>());
    }
    if (v.dimension() != dimension_) {
      throw ProviderError(
          "embedding vector dimension " + std::to_string(v.dimension()) +
              " does not match configured " + std::to_string(dimension_),
          false);
    }
    if (!v.finite())
      throw ProviderError("embedding vector has non-finite entries", false);
    v.normalize(); // unit-length is this project's vector contract
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace kedit
