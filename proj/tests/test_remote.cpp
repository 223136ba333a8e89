#include "kedit/remote.hpp"

#include "kedit/errors.hpp"

#include "doctest.h"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <thread>

using namespace kedit;

namespace {

// Loopback endpoint whose behavior each test scripts through `handler`.
struct LocalServer {
  httplib::Server server;
  std::thread worker;
  int port = 0;
  std::function<void(const httplib::Request&, httplib::Response&)> handler;
  std::atomic<int> hits{0};

  LocalServer() {
    server.Post("/api", [this](const httplib::Request& req,
                               httplib::Response& res) {
      ++hits;
      handler(req, res);
    });
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    worker = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~LocalServer() {
    server.stop();
    worker.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port) + "/api";
  }
};

struct EnvVar {
  std::string name;
  EnvVar(std::string n, const char* value) : name(std::move(n)) {
    if (value)
      ::setenv(name.c_str(), value, 1);
    else
      ::unsetenv(name.c_str());
  }
  ~EnvVar() { ::unsetenv(name.c_str()); }
};

RemoteOptions options_for(const LocalServer& server) {
  RemoteOptions opt;
  opt.url = server.url();
  opt.api_key_env = "KEDIT_TEST_API_KEY";
  opt.max_retries = 2;
  opt.retry_initial_ms = 1;
  return opt;
}

GenerationRequest sample_request() {
  GenerationRequest req;
  req.prompt = "Question: Q?\nThoughts with New Knowledge: ";
  req.temperature = 0.7; // the backend must ignore this
  req.stop_sequences = {"#", "\n"};
  req.max_tokens = 64;
  return req;
}

} // namespace

TEST_CASE("the generator posts a pinned-greedy request with a bearer token") {
  LocalServer server;
  EnvVar key("KEDIT_TEST_API_KEY", "sekret");
  nlohmann::json seen;
  std::string seen_auth;
  server.handler = [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    seen_auth = req.get_header_value("Authorization");
    res.set_content(R"({"text": "The capital of France is Lyon."})",
                    "application/json");
  };

  auto opt = options_for(server);
  opt.model = "step-writer-v2";
  RemoteGeneratorBackend backend(opt);
  CHECK(backend.id() == "remote-generator:step-writer-v2");

  auto text = backend.complete(sample_request());
  CHECK(text == "The capital of France is Lyon.");
  CHECK(seen_auth == "Bearer sekret");
  CHECK(seen["prompt"] == sample_request().prompt);
  CHECK(seen["temperature"] == 0.0); // never the caller's temperature
  CHECK(seen["max_tokens"] == 64);
  CHECK(seen["stop"] == nlohmann::json::array({"#", "\n"}));
  CHECK(seen["model"] == "step-writer-v2");
}

TEST_CASE("server hiccups are retried, hard client errors are not") {
  LocalServer server;
  EnvVar key("KEDIT_TEST_API_KEY", "sekret");

  SUBCASE("a 500 is retried until the server recovers") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      if (server.hits.load() < 3) {
        res.status = 503;
        res.set_content("busy", "text/plain");
        return;
      }
      res.set_content(R"({"text": "ok"})", "application/json");
    };
    RemoteGeneratorBackend backend(options_for(server));
    CHECK(backend.complete(sample_request()) == "ok");
    CHECK(server.hits.load() == 3);
  }

  SUBCASE("retries run out eventually") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
    };
    RemoteGeneratorBackend backend(options_for(server));
    CHECK_THROWS_AS(backend.complete(sample_request()), ProviderError);
    CHECK(server.hits.load() == 3); // 1 try + max_retries
  }

  SUBCASE("a 4xx fails immediately") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      res.status = 404;
      res.set_content("no such route", "text/plain");
    };
    RemoteGeneratorBackend backend(options_for(server));
    CHECK_THROWS_AS(backend.complete(sample_request()), ProviderError);
    CHECK(server.hits.load() == 1);
  }
}

TEST_CASE("malformed generator responses are provider errors") {
  LocalServer server;
  EnvVar key("KEDIT_TEST_API_KEY", "sekret");
  RemoteGeneratorBackend backend(options_for(server));

  SUBCASE("missing text field") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"completion": "wrong shape"})", "application/json");
    };
    CHECK_THROWS_AS(backend.complete(sample_request()), ProviderError);
  }
  SUBCASE("not JSON at all") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      res.set_content("<html>oops</html>", "text/html");
    };
    CHECK_THROWS_AS(backend.complete(sample_request()), ProviderError);
  }
}

TEST_CASE("credentials come from the environment and are required") {
  LocalServer server;

  SUBCASE("an unset variable fails construction") {
    EnvVar key("KEDIT_TEST_API_KEY", nullptr);
    CHECK_THROWS_AS(RemoteGeneratorBackend(options_for(server)), ConfigError);
  }
  SUBCASE("an empty variable is as bad as an unset one") {
    EnvVar key("KEDIT_TEST_API_KEY", "");
    CHECK_THROWS_AS(RemoteGeneratorBackend(options_for(server)), ConfigError);
  }
  SUBCASE("no env name configured means no Authorization header") {
    EnvVar key("KEDIT_TEST_API_KEY", nullptr);
    std::string seen_auth = "unset";
    server.handler = [&](const httplib::Request& req, httplib::Response& res) {
      seen_auth = req.get_header_value("Authorization");
      res.set_content(R"({"text": "ok"})", "application/json");
    };
    auto opt = options_for(server);
    opt.api_key_env.clear();
    RemoteGeneratorBackend backend(opt);
    CHECK(backend.complete(sample_request()) == "ok");
    CHECK(seen_auth.empty());
  }
}

TEST_CASE("a url without a scheme is rejected") {
  RemoteOptions opt;
  opt.url = "127.0.0.1:9999/api";
  CHECK_THROWS_AS(RemoteGeneratorBackend{opt}, ConfigError);
}

TEST_CASE("the embedder re-normalizes and validates what it receives") {
  LocalServer server;
  EnvVar key("KEDIT_TEST_API_KEY", "sekret");

  SUBCASE("vectors come back unit length") {
    server.handler = [&](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body);
      REQUIRE(body["texts"].size() == 2);
      res.set_content(R"({"vectors": [[3.0, 4.0], [0.0, 2.0]]})",
                      "application/json");
    };
    RemoteEmbeddingProvider provider(options_for(server), 2);
    auto vectors = provider.embed_batch({"first", "second"});
    REQUIRE(vectors.size() == 2);
    CHECK(vectors[0].values[0] == doctest::Approx(0.6));
    CHECK(vectors[0].values[1] == doctest::Approx(0.8));
    CHECK(vectors[1].values[1] == doctest::Approx(1.0));
  }

  SUBCASE("one vector per text, no more, no fewer") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"vectors": [[1.0, 0.0]]})", "application/json");
    };
    RemoteEmbeddingProvider provider(options_for(server), 2);
    CHECK_THROWS_AS(provider.embed_batch({"first", "second"}), ProviderError);
  }

  SUBCASE("wrong dimension is rejected") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"vectors": [[1.0, 0.0, 0.0]]})", "application/json");
    };
    RemoteEmbeddingProvider provider(options_for(server), 2);
    CHECK_THROWS_AS(provider.embed_batch({"only"}), ProviderError);
  }

  SUBCASE("non-finite entries are rejected") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      // 1e400 overflows double and parses as infinity.
      res.set_content(R"({"vectors": [[1e400, 0.0]]})", "application/json");
    };
    RemoteEmbeddingProvider provider(options_for(server), 2);
    CHECK_THROWS_AS(provider.embed_batch({"only"}), ProviderError);
  }

  SUBCASE("an empty batch never touches the network") {
    server.handler = [&](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
    };
    RemoteEmbeddingProvider provider(options_for(server), 2);
    CHECK(provider.embed_batch({}).empty());
    CHECK(server.hits.load() == 0);
  }

  SUBCASE("a zero dimension makes no sense") {
    CHECK_THROWS_AS(RemoteEmbeddingProvider(options_for(server), 0),
                    ConfigError);
  }
}

TEST_CASE("recorded exchanges replay offline, byte for byte") {
  const std::string log_path = "remote_replay_test.jsonl";
  std::string live_text;
  std::vector<EmbeddingVector> live_vectors;

  {
    LocalServer server;
    EnvVar key("KEDIT_TEST_API_KEY", "sekret");
    server.handler = [&](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body);
      if (body.contains("prompt")) {
        res.set_content(R"({"text": "Berlin is the answer."})",
                        "application/json");
      } else {
        res.set_content(R"({"vectors": [[1.0, 1.0]]})", "application/json");
      }
    };
    auto log = std::make_shared<ReplayLog>(log_path);
    auto gen_opt = options_for(server);
    gen_opt.log = log;
    RemoteGeneratorBackend live_gen(gen_opt);
    live_text = live_gen.complete(sample_request());

    auto emb_opt = options_for(server);
    emb_opt.log = log;
    RemoteEmbeddingProvider live_emb(emb_opt, 2);
    live_vectors = live_emb.embed_batch({"Berlin"});
    CHECK(server.hits.load() == 2);
  }

  // The log is plain JSONL with one entry per exchange.
  {
    std::ifstream in(log_path);
    std::string line;
    std::size_t entries = 0;
    while (std::getline(in, line)) {
      auto entry = nlohmann::json::parse(line);
      CHECK(entry.contains("kind"));
      CHECK(entry.contains("request"));
      CHECK(entry.contains("response"));
      ++entries;
    }
    CHECK(entries == 2);
  }

  // Offline now: no server, no API key, same answers.
  EnvVar key("KEDIT_TEST_API_KEY", nullptr);
  auto player = std::make_shared<ReplayPlayer>(log_path);

  RemoteOptions gen_opt;
  gen_opt.url = "http://127.0.0.1:1/api"; // nothing listens here
  gen_opt.api_key_env = "KEDIT_TEST_API_KEY";
  gen_opt.replay = player;
  RemoteGeneratorBackend replay_gen(gen_opt);
  CHECK(replay_gen.complete(sample_request()) == live_text);

  RemoteOptions emb_opt = gen_opt;
  RemoteEmbeddingProvider replay_emb(emb_opt, 2);
  auto vectors = replay_emb.embed_batch({"Berlin"});
  REQUIRE(vectors.size() == 1);
  CHECK(vectors[0].values[0] == doctest::Approx(live_vectors[0].values[0]));
  CHECK(vectors[0].values[1] == doctest::Approx(live_vectors[0].values[1]));

  // A request that was never recorded is an error, not a network fallback.
  auto other = sample_request();
  other.prompt = "Question: something new?\nThoughts with New Knowledge: ";
  CHECK_THROWS_AS(replay_gen.complete(other), ProviderError);
  CHECK_THROWS_AS(replay_emb.embed_batch({"Paris"}), ProviderError);

  std::remove(log_path.c_str());
}
