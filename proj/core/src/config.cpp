#include "kedit/config.hpp"

#include "kedit/errors.hpp"
#include "kedit/fact_graph.hpp"
#include "kedit/judge.hpp"
#include "kedit/oracle.hpp"
#include "kedit/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

namespace kedit {

namespace {

void reject_api_keys(const nlohmann::json& node, const std::string& where) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      const std::string folded = fold_case(it.key());
      if (folded.find("api_key") != std::string::npos ||
          folded.find("api-key") != std::string::npos ||
          folded.find("apikey") != std::string::npos) {
        throw ConfigError("config key \"" + where + it.key() +
                          "\": api keys come from the environment "
                          "(GENERATOR_API_KEY / EMBEDDING_API_KEY), never "
                          "the config file");
      }
      reject_api_keys(it.value(), where + it.key() + ".");
    }
  } else if (node.is_array()) {
    for (const auto& item : node) reject_api_keys(item, where);
  }
}

class Section {
public:
  Section(const nlohmann::json& node, std::string name)
      : node_(node), name_(std::move(name)) {
    if (!node_.is_object())
      throw ConfigError("config section \"" + name_ + "\" must be an object");
  }

  ~Section() = default;

  template <typename T>
  void read(const char* key, T& into) {
    auto it = node_.find(key);
    if (it == node_.end()) return;
    try {
      into = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config field \"" + name_ + key +
                        "\" has the wrong type");
    }
    seen_.push_back(key);
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        throw ConfigError("unknown config key \"" + name_ + it.key() + "\"");
      }
    }
  }

  const nlohmann::json& raw() const { return node_; }

private:
  const nlohmann::json& node_;
  std::string name_;
  std::vector<std::string> seen_;
};

} // namespace

void Config::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + path + ": " +
                      e.what());
  }
  reject_api_keys(doc, "");

  if (doc.contains("backend")) {
    Section s(doc["backend"], "backend.");
    s.read("kind", backend.kind);
    s.read("url", backend.url);
    s.read("model", backend.model);
    s.read("graph_path", backend.graph_path);
    s.finish();
  }
  if (doc.contains("embedding")) {
    Section s(doc["embedding"], "embedding.");
    s.read("kind", embedding.kind);
    s.read("url", embedding.url);
    s.read("dimension", embedding.dimension);
    s.finish();
  }
  if (doc.contains("verifier")) {
    Section s(doc["verifier"], "verifier.");
    s.read("kind", verifier.kind);
    s.read("demos_path", verifier.demos_path);
    s.read("seed", verifier.seed);
    s.read("positive_demos", verifier.positive_demos);
    s.read("negative_demos", verifier.negative_demos);
    s.finish();
  }
  if (doc.contains("limits")) {
    Section s(doc["limits"], "limits.");
    s.read("retrieval_n", limits.retrieval_n);
    s.read("d_max", limits.d_max);
    s.read("node_budget", limits.node_budget);
    s.finish();
  }

  static const char* kKnown[] = {
      "backend",    "embedding",     "verifier",   "limits",
      "batch_size", "shuffle_seed",  "parallelism", "early_stop",
      "stable_output", "output_dir", "record_path", "replay_path"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    for (const char* k : kKnown) known = known || it.key() == k;
    if (!known) throw ConfigError("unknown config key \"" + it.key() + "\"");
  }

  if (doc.contains("batch_size")) {
    const auto& b = doc["batch_size"];
    if (b.is_string() && b.get<std::string>() == "full") {
      batch_size.reset();
    } else if (b.is_number_unsigned()) {
      batch_size = b.get<std::size_t>();
    } else {
      throw ConfigError(
          "config field \"batch_size\" must be a positive number or \"full\"");
    }
  }
  if (doc.contains("shuffle_seed")) {
    if (!doc["shuffle_seed"].is_number_unsigned())
      throw ConfigError("config field \"shuffle_seed\" must be unsigned");
    shuffle_seed = doc["shuffle_seed"].get<unsigned>();
  }

  Section top(doc, "");
  top.read("parallelism", parallelism);
  top.read("early_stop", early_stop);
  top.read("stable_output", stable_output);
  top.read("output_dir", output_dir);
  top.read("record_path", record_path);
  top.read("replay_path", replay_path);
}

void Config::validate() const {
  limits.validate();

  if (backend.kind != "oracle" && backend.kind != "remote")
    throw ConfigError("backend.kind must be \"oracle\" or \"remote\", got \"" +
                      backend.kind + "\"");
  if (backend.kind == "remote" && backend.url.empty())
    throw ConfigError("backend.url is required for the remote backend");

  if (embedding.kind != "hashing" && embedding.kind != "remote")
    throw ConfigError(
        "embedding.kind must be \"hashing\" or \"remote\", got \"" +
        embedding.kind + "\"");
  if (embedding.kind == "remote" && embedding.url.empty())
    throw ConfigError("embedding.url is required for the remote embedder");
  if (embedding.dimension == 0)
    throw ConfigError("embedding.dimension must be >= 1");

  if (verifier.kind != "rules" && verifier.kind != "judge")
    throw ConfigError("verifier.kind must be \"rules\" or \"judge\", got \"" +
                      verifier.kind + "\"");
  if (verifier.kind == "judge" && verifier.demos_path.empty())
    throw ConfigError("verifier.demos_path is required for the judge");
  if (verifier.kind == "judge" &&
      verifier.positive_demos + verifier.negative_demos == 0)
    throw ConfigError("verifier demos: at least one demo is required");

  if (parallelism == 0) throw ConfigError("parallelism must be >= 1");
  if (batch_size && *batch_size == 0)
    throw ConfigError("batch_size must be >= 1 (or \"full\")");
}

Providers make_providers(const Config& config) {
  config.validate();

  Providers out;
  if (!config.replay_path.empty())
    out.replay = std::make_shared<ReplayPlayer>(config.replay_path);
  if (!config.record_path.empty())
    out.log = std::make_shared<ReplayLog>(config.record_path);

  if (config.embedding.kind == "hashing") {
    out.embedding =
        std::make_shared<HashingEmbeddingProvider>(config.embedding.dimension);
  } else {
    RemoteOptions options;
    options.url = config.embedding.url;
    options.api_key_env = "EMBEDDING_API_KEY";
    options.log = out.log;
    options.replay = out.replay;
    out.embedding = std::make_shared<RemoteEmbeddingProvider>(
        std::move(options), config.embedding.dimension);
  }

  if (config.backend.kind == "oracle") {
    if (config.backend.graph_path.empty())
      throw ConfigError(
          "backend.graph_path is required for the oracle backend");
    auto graph = std::make_shared<FactGraph>(
        FactGraph::load(config.backend.graph_path));
    out.generator = std::make_shared<OracleBackend>(std::move(graph));
  } else {
    RemoteOptions options;
    options.url = config.backend.url;
    options.model = config.backend.model;
    options.api_key_env = "GENERATOR_API_KEY";
    options.log = out.log;
    options.replay = out.replay;
    out.generator =
        std::make_shared<RemoteGeneratorBackend>(std::move(options));
  }
  return out;
}

std::shared_ptr<ConstraintVerifier> make_verifier(
    const Config& config, std::shared_ptr<GeneratorBackend> backend,
    const SentenceTemplates& templates) {
  if (config.verifier.kind == "rules") {
    return std::make_shared<RuleVerifier>(templates);
  }
  JudgeConfig jc;
  jc.seed = config.verifier.seed;
  jc.positive_demos = config.verifier.positive_demos;
  jc.negative_demos = config.verifier.negative_demos;
  return std::make_shared<JudgeVerifier>(
      std::move(backend), load_judge_demos(config.verifier.demos_path), jc);
}

} // namespace kedit
