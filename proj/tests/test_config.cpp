#include "kedit/config.hpp"

#include "kedit/errors.hpp"
#include "kedit/fact_graph.hpp"
#include "kedit/oracle.hpp"

#include "helpers.hpp"

#include "doctest.h"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

using namespace kedit;
using namespace kedit::testutil;

namespace {

struct TempConfig {
  std::string path;
  explicit TempConfig(const nlohmann::json& doc,
                      std::string name = "config_test.json")
      : path(std::move(name)) {
    std::ofstream out(path);
    out << doc.dump(2);
  }
  struct Raw {};
  TempConfig(Raw, const std::string& raw,
             std::string name = "config_test.json")
      : path(std::move(name)) {
    std::ofstream out(path);
    out << raw;
  }
  ~TempConfig() { std::remove(path.c_str()); }
};

std::string error_of(Config& config, const std::string& path) {
  try {
    config.apply_file(path);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("a file overlays defaults without erasing what it omits") {
  TempConfig file(nlohmann::json{
      {"backend", {{"kind", "oracle"}, {"graph_path", "world.json"}}},
      {"embedding", {{"dimension", 64}}},
      {"limits", {{"retrieval_n", 3}}},
      {"parallelism", 4},
      {"early_stop", false},
      {"output_dir", "runs"},
  });
  Config config;
  config.apply_file(file.path);

  CHECK(config.backend.kind == "oracle");
  CHECK(config.backend.graph_path == "world.json");
  CHECK(config.embedding.kind == "hashing"); // untouched default
  CHECK(config.embedding.dimension == 64);
  CHECK(config.limits.retrieval_n == 3);
  CHECK(config.limits.d_max == 8);        // untouched default
  CHECK(config.limits.node_budget == 200); // untouched default
  CHECK(config.parallelism == 4);
  CHECK_FALSE(config.early_stop);
  CHECK(config.output_dir == "runs");
  CHECK(config.batch_size == 100); // untouched default
  config.validate();               // the overlay stays coherent
}

TEST_CASE("unknown keys are named in the error, including nested ones") {
  Config config;
  SUBCASE("top level") {
    TempConfig file(nlohmann::json{{"batchsize", 2}});
    auto message = error_of(config, file.path);
    CHECK(message == "unknown config key \"batchsize\"");
  }
  SUBCASE("inside a section") {
    TempConfig file(nlohmann::json{{"backend", {{"kind", "oracle"},
                                                {"host", "example"}}}});
    auto message = error_of(config, file.path);
    CHECK(message == "unknown config key \"backend.host\"");
  }
}

TEST_CASE("api keys are refused anywhere in the file") {
  Config config;
  SUBCASE("top level") {
    TempConfig file(nlohmann::json{{"api_key", "oops"}});
    auto message = error_of(config, file.path);
    CHECK(message.find("config key \"api_key\"") != std::string::npos);
    CHECK(message.find("GENERATOR_API_KEY") != std::string::npos);
    CHECK(message.find("EMBEDDING_API_KEY") != std::string::npos);
  }
  SUBCASE("nested under a section") {
    TempConfig file(
        nlohmann::json{{"backend", {{"kind", "remote"}, {"apiKey", "oops"}}}});
    auto message = error_of(config, file.path);
    CHECK(message.find("config key \"backend.apiKey\"") != std::string::npos);
  }
  SUBCASE("hyphenated spelling") {
    TempConfig file(nlohmann::json{{"embedding", {{"api-key", "oops"}}}});
    CHECK_THROWS_AS(config.apply_file(file.path), ConfigError);
  }
  SUBCASE("buried inside an array of objects") {
    TempConfig file(nlohmann::json::parse(
        R"({"limits": {"extras": [{"API_KEY": "x"}]}})"));
    auto message = error_of(config, file.path);
    // Rejected for the key itself, before the unknown-key check runs.
    CHECK(message.find("API_KEY") != std::string::npos);
    CHECK(message.find("environment") != std::string::npos);
  }
}

TEST_CASE("batch_size accepts a count or the word \"full\"") {
  Config config;
  SUBCASE("number") {
    TempConfig file(nlohmann::json{{"batch_size", 7}});
    config.apply_file(file.path);
    REQUIRE(config.batch_size.has_value());
    CHECK(*config.batch_size == 7);
  }
  SUBCASE("\"full\" clears the grouping") {
    TempConfig file(nlohmann::json{{"batch_size", "full"}});
    config.apply_file(file.path);
    CHECK_FALSE(config.batch_size.has_value());
  }
  SUBCASE("anything else is rejected") {
    TempConfig file(nlohmann::json{{"batch_size", "dozens"}});
    CHECK_THROWS_AS(config.apply_file(file.path), ConfigError);
    TempConfig negative(nlohmann::json{{"batch_size", -3}},
                        "config_test_negative.json");
    CHECK_THROWS_AS(config.apply_file(negative.path), ConfigError);
  }
}

TEST_CASE("wrong field types name the field") {
  Config config;
  TempConfig file(nlohmann::json{{"verifier", {{"kind", 12}}}});
  auto message = error_of(config, file.path);
  CHECK(message == "config field \"verifier.kind\" has the wrong type");
}

TEST_CASE("unreadable or non-JSON files fail up front") {
  Config config;
  CHECK_THROWS_AS(config.apply_file("no_such_config.json"), ConfigError);
  TempConfig file(TempConfig::Raw{}, "{not json", "config_test_broken.json");
  CHECK_THROWS_AS(config.apply_file(file.path), ConfigError);
}

TEST_CASE("validate catches incoherent combinations") {
  Config config;

  SUBCASE("unknown backend kind") {
    config.backend.kind = "psychic";
    CHECK_THROWS_WITH_AS(config.validate(),
                         "backend.kind must be \"oracle\" or \"remote\", got "
                         "\"psychic\"",
                         ConfigError);
  }
  SUBCASE("remote backend needs a url") {
    config.backend.kind = "remote";
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  SUBCASE("remote embedder needs a url") {
    config.embedding.kind = "remote";
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  SUBCASE("judge needs demos") {
    config.verifier.kind = "judge";
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  SUBCASE("zero parallelism") {
    config.parallelism = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  SUBCASE("zero batch size") {
    config.batch_size = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  SUBCASE("zero embedding dimension") {
    config.embedding.dimension = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  SUBCASE("search limits are validated too") {
    config.limits.retrieval_n = 0;
    CHECK_THROWS(config.validate());
  }
}

TEST_CASE("providers are wired per config") {
  SUBCASE("oracle needs a graph path") {
    Config config; // defaults: oracle + hashing
    CHECK_THROWS_AS(make_providers(config), ConfigError);
  }
  SUBCASE("oracle backend loads the graph from disk") {
    auto world = geography_world();
    world.graph->save("config_test_graph.json");
    Config config;
    config.backend.graph_path = "config_test_graph.json";
    config.embedding.dimension = 32;
    auto providers = make_providers(config);
    REQUIRE(providers.generator != nullptr);
    CHECK(providers.generator->id() == "oracle");
    REQUIRE(providers.embedding != nullptr);
    CHECK(providers.embedding->id() == "hashing-32");
    CHECK(providers.embedding->dimension() == 32);
    CHECK(providers.log == nullptr);
    CHECK(providers.replay == nullptr);
    std::remove("config_test_graph.json");
  }
}

TEST_CASE("the verifier factory picks rules or the judge") {
  auto world = geography_world();
  Config config;
  auto backend = std::make_shared<OracleBackend>(world.graph);

  auto rules = make_verifier(config, backend, world.templates());
  CHECK(rules->id() == "rules");

  config.verifier.kind = "judge";
  config.verifier.demos_path = "config_test_demos.json";
  {
    nlohmann::json demos = nlohmann::json::array();
    for (const char* kind :
         {"conciseness", "coherence", "receptiveness", "pertinence"}) {
      for (bool label : {true, false}) {
        demos.push_back({{"constraint", kind},
                         {"question", "What is the capital of France?"},
                         {"chain", nlohmann::json::array()},
                         {"candidate", "The capital of France is Paris."},
                         {"label", label}});
      }
    }
    std::ofstream out(config.verifier.demos_path);
    out << demos.dump();
  }
  auto judge = make_verifier(config, backend, world.templates());
  CHECK(judge->id() == "judge");
  std::remove(config.verifier.demos_path.c_str());
}
