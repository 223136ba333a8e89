// Command-line front end: eval, build-bench, stats, trace, synth.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include "kedit/config.hpp"
#include "kedit/dataset.hpp"
#include "kedit/errors.hpp"
#include "kedit/evaluate.hpp"
#include "kedit/fact_graph.hpp"
#include "kedit/oracle.hpp"
#include "kedit/search.hpp"
#include "kedit/synthetic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

using namespace kedit;

struct CommonFlags {
  std::string config_path;
  std::string graph_path;
  std::string batch;
  std::string replay_path;
  std::string record_path;
  std::size_t parallelism = 0;
  std::size_t retrieval_n = 0;
  std::size_t d_max = 0;
  std::size_t node_budget = 0;
  long long shuffle_seed = -1;
  bool no_early_stop = false;
  bool stable_output = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--graph", flags.graph_path,
                  "fact graph backing the oracle backend");
  cmd->add_option("--batch", flags.batch,
                  "edit batch size (positive number or \"full\")");
  cmd->add_option("--parallelism", flags.parallelism, "worker threads");
  cmd->add_option("--retrieval-n", flags.retrieval_n,
                  "edited facts retrieved per expansion");
  cmd->add_option("--d-max", flags.d_max, "maximum chain length");
  cmd->add_option("--node-budget", flags.node_budget,
                  "maximum expansions per question");
  cmd->add_option("--shuffle-seed", flags.shuffle_seed,
                  "shuffle instances before batching");
  cmd->add_option("--replay", flags.replay_path,
                  "serve provider responses from this replay log");
  cmd->add_option("--record", flags.record_path,
                  "record provider exchanges to this replay log");
  cmd->add_flag("--no-early-stop", flags.no_early_stop,
                "explore past the first complete chain");
  cmd->add_flag("--stable-output", flags.stable_output,
                "zero wall-clock fields for byte-stable reports");
}

// Flags beat the file, the file beats the defaults.
Config build_config(const CLI::App* cmd, const CommonFlags& flags) {
  Config config;
  if (!flags.config_path.empty()) config.apply_file(flags.config_path);

  if (cmd->count("--graph")) config.backend.graph_path = flags.graph_path;
  if (cmd->count("--parallelism")) config.parallelism = flags.parallelism;
  if (cmd->count("--retrieval-n")) config.limits.retrieval_n = flags.retrieval_n;
  if (cmd->count("--d-max")) config.limits.d_max = flags.d_max;
  if (cmd->count("--node-budget")) config.limits.node_budget = flags.node_budget;
  if (cmd->count("--no-early-stop")) config.early_stop = false;
  if (cmd->count("--stable-output")) config.stable_output = true;
  if (cmd->count("--replay")) config.replay_path = flags.replay_path;
  if (cmd->count("--record")) config.record_path = flags.record_path;
  if (cmd->count("--shuffle-seed")) {
    if (flags.shuffle_seed < 0)
      throw ConfigError("--shuffle-seed must be non-negative");
    config.shuffle_seed = static_cast<unsigned>(flags.shuffle_seed);
  }
  if (cmd->count("--batch")) {
    if (flags.batch == "full") {
      config.batch_size.reset();
    } else {
      try {
        const long long n = std::stoll(flags.batch);
        if (n <= 0) throw std::invalid_argument("nonpositive");
        config.batch_size = static_cast<std::size_t>(n);
      } catch (const std::exception&) {
        throw ConfigError("--batch must be a positive number or \"full\"");
      }
    }
  }
  return config;
}

// Oracle runs also need the graph's sentence templates, so expose the graph
// next to the backend it grounds.
struct RuntimePieces {
  Providers providers;
  std::shared_ptr<const FactGraph> graph; // oracle only
};

RuntimePieces make_runtime(const Config& config) {
  RuntimePieces pieces;
  if (config.backend.kind == "oracle") {
    if (config.backend.graph_path.empty())
      throw ConfigError(
          "backend.graph_path (or --graph) is required for the oracle "
          "backend");
    pieces.graph = std::make_shared<const FactGraph>(
        FactGraph::load(config.backend.graph_path));
  }
  pieces.providers = make_providers(config);
  return pieces;
}

void print_warnings(const std::vector<std::string>& warnings,
                    std::size_t skipped) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (skipped > 0)
    std::cerr << "warning: skipped " << skipped << " malformed case(s)\n";
}

int cmd_eval(const CLI::App* cmd, const CommonFlags& flags,
             const std::string& method_name, const std::string& dataset_path,
             const std::string& output_dir_flag) {
  Config config = build_config(cmd, flags);
  if (cmd->count("--output-dir")) config.output_dir = output_dir_flag;
  config.validate();

  auto method = method_from_name(method_name);
  if (!method) {
    throw ConfigError("unknown method \"" + method_name +
                      "\" (expected dfs, bfs, mello, or parametric-only)");
  }

  LoadReport loaded = load_dataset(dataset_path);
  print_warnings(loaded.warnings, loaded.skipped);

  RuntimePieces runtime = make_runtime(config);
  SentenceTemplates templates = loaded.templates;
  if (runtime.graph) templates.merge(runtime.graph->templates());

  auto verifier =
      make_verifier(config, runtime.providers.generator, templates);
  VerifierFactory factory = [verifier](const Instance&) { return verifier; };

  EvalOptions options;
  options.limits = config.limits;
  options.batch_size = config.batch_size;
  options.shuffle_seed = config.shuffle_seed;
  options.parallelism = config.parallelism;
  options.stable_output = config.stable_output;
  options.dfs.early_stop = config.early_stop;

  EvalReport report =
      evaluate(*method, loaded.dataset, *runtime.providers.generator, factory,
               runtime.providers.embedding, templates, options);
  report.dataset = dataset_path;

  std::filesystem::create_directories(config.output_dir);
  const auto report_path =
      std::filesystem::path(config.output_dir) / "report.jsonl";
  const auto summary_path =
      std::filesystem::path(config.output_dir) / "summary.json";
  write_report_jsonl(report, report_path.string());
  write_report_summary(report, summary_path.string());

  const auto& s = report.summary;
  std::cout << "method=" << report.method << " dataset=" << dataset_path
            << " instances=" << s.instances << " correct=" << s.correct
            << " accuracy=" << std::fixed << std::setprecision(4) << s.accuracy
            << " mean_expansions=" << std::setprecision(2) << s.mean_expansions
            << " mean_generator_calls=" << s.mean_generator_calls
            << " mean_wall_ms=" << s.mean_wall_ms
            << " flagged=" << s.flagged << "\n";
  std::cout << "report: " << report_path.string() << "\n";
  std::cout << "summary: " << summary_path.string() << "\n";
  return 0;
}

int cmd_stats(const std::string& dataset_path) {
  LoadReport loaded = load_dataset(dataset_path);
  print_warnings(loaded.warnings, loaded.skipped);
  StatsRow row = stats(loaded.dataset);
  std::cout << "dataset=" << dataset_path << " instances=" << row.instances
            << " mean_hops=" << std::fixed << std::setprecision(2)
            << row.mean_hops << " mean_edits=" << row.mean_edits
            << " conflicted=" << row.conflicted << "\n";
  return 0;
}

int cmd_build_bench(const std::string& dataset_path, const std::string& mode,
                    const std::string& out_path,
                    const std::string& exclude_path, bool one_shot) {
  LoadReport loaded = load_dataset(dataset_path);
  print_warnings(loaded.warnings, loaded.skipped);

  Dataset subset;
  if (mode == "clean") {
    subset = build_clean(loaded.dataset, /*fixed_point=*/!one_shot);
  } else if (mode == "hard") {
    std::set<std::string> excluded;
    if (!exclude_path.empty()) {
      std::ifstream in(exclude_path);
      if (!in)
        throw std::runtime_error("cannot read exclude file: " + exclude_path);
      nlohmann::json doc;
      in >> doc;
      if (doc.is_array() && (doc.empty() || doc.front().is_string())) {
        for (const auto& id : doc) excluded.insert(id.get<std::string>());
      } else {
        // Treat it as a dataset and exclude its case ids.
        LoadReport other = load_dataset(exclude_path);
        for (const auto& inst : other.dataset.instances)
          excluded.insert(inst.id);
      }
    }
    std::vector<std::string> warnings;
    subset = build_hard(loaded.dataset, excluded, &warnings);
    print_warnings(warnings, 0);
  } else {
    throw ConfigError("--mode must be \"clean\" or \"hard\", got \"" + mode +
                      "\"");
  }

  save_dataset(subset, loaded.templates, out_path);
  StatsRow row = stats(subset);
  std::cout << "mode=" << mode << " out=" << out_path
            << " instances=" << row.instances << " mean_hops=" << std::fixed
            << std::setprecision(2) << row.mean_hops
            << " mean_edits=" << row.mean_edits
            << " conflicted=" << row.conflicted << "\n";
  return 0;
}

std::string verdict_summary(const Candidate& c) {
  if (c.valid) return "valid";
  for (const auto& v : c.verdicts) {
    if (!v.passed && !v.skipped) {
      std::string out = std::string(to_string(v.kind)) + ": " +
                        (v.rationale.empty() ? "failed" : v.rationale);
      return out;
    }
  }
  return "invalid";
}

void render_trace(std::ostream& out, const std::string& question,
                  const Outcome& outcome) {
  out << "question: " << question << "\n";
  const auto& iterations = outcome.trace.iterations;
  for (std::size_t i = 0; i < iterations.size(); ++i) {
    const auto& rec = iterations[i];
    out << "iteration " << (i + 1) << " | depth " << rec.chain.size() << "\n";
    if (rec.chain.empty()) {
      out << "  chain: (start)\n";
    } else {
      out << "  chain:\n";
      for (const auto& step : rec.chain) out << "    - " << step << "\n";
    }
    if (rec.generator_dead_end) out << "  generator: dead end\n";
    for (std::size_t c = 0; c < rec.candidates.size(); ++c) {
      const Candidate& cand = rec.candidates[c];
      const bool chosen = std::find(rec.choices.begin(), rec.choices.end(),
                                    c) != rec.choices.end();
      out << "  " << (chosen ? ">" : " ") << " [" << std::setw(2) << (c + 1)
          << "] " << (cand.source == SourceKind::Edited ? "edited    "
                                                        : "parametric");
      if (cand.distance) {
        out << " d=" << std::fixed << std::setprecision(4) << *cand.distance;
      } else {
        out << "         ";
      }
      out << "  " << cand.text << "  (" << verdict_summary(cand) << ")\n";
    }
    if (!rec.events.empty()) {
      out << "  events:";
      for (const auto& e : rec.events) out << " " << e;
      out << "\n";
    }
  }
  out << "termination: " << to_string(outcome.termination) << "\n";
  if (outcome.answer) {
    out << "answer: " << *outcome.answer << "\n";
  } else {
    out << "answer: (none)\n";
  }
  const auto& t = outcome.trace.totals;
  out << "totals: expansions=" << t.expansions
      << " generator_calls=" << t.generator_calls
      << " verifier_calls=" << t.verifier_calls
      << " backtracks=" << t.backtracks << "\n";
}

int cmd_trace(const CLI::App* cmd, const CommonFlags& flags,
              const std::string& question, const std::string& edits_path,
              const std::string& method_name, const std::string& out_path) {
  Config config = build_config(cmd, flags);
  config.validate();

  RuntimePieces runtime = make_runtime(config);
  SentenceTemplates templates = SentenceTemplates::defaults();
  if (runtime.graph) templates.merge(runtime.graph->templates());

  std::vector<EditedFact> facts;
  if (!edits_path.empty()) {
    std::ifstream in(edits_path);
    if (!in) throw std::runtime_error("cannot read edits file: " + edits_path);
    nlohmann::json doc;
    in >> doc;
    if (!doc.is_array())
      throw std::runtime_error("edits file must be a JSON array");
    for (const auto& item : doc) {
      if (!item.is_object() || !item.contains("subject") ||
          !item.contains("relation") || !item.contains("object")) {
        throw std::runtime_error(
            "each edit must be an object with \"subject\", \"relation\" and "
            "\"object\" (optional \"text\"): " + edits_path);
      }
      EditedFact fact;
      fact.triple = Triple{item.at("subject").get<std::string>(),
                           item.at("relation").get<std::string>(),
                           item.at("object").get<std::string>()};
      validate_triple(fact.triple);
      if (item.contains("text")) {
        fact.text = item["text"].get<std::string>();
      } else {
        fact.text = templates.render(fact.triple);
      }
      fact.source_instance = "edits-file";
      facts.push_back(std::move(fact));
    }
  }

  KnowledgeStore store =
      KnowledgeStore::build(std::move(facts), runtime.providers.embedding);
  auto verifier =
      make_verifier(config, runtime.providers.generator, templates);

  Outcome outcome;
  if (method_name == "dfs") {
    DfsOptions dfs_options;
    dfs_options.early_stop = config.early_stop;
    outcome = dfs(question, store, *runtime.providers.generator, *verifier,
                  config.limits, dfs_options);
  } else if (method_name == "bfs") {
    outcome = bfs(question, store, *runtime.providers.generator, *verifier,
                  config.limits);
  } else {
    throw ConfigError("trace supports methods \"dfs\" and \"bfs\", got \"" +
                      method_name + "\"");
  }

  render_trace(std::cout, question, outcome);

  if (!out_path.empty()) {
    nlohmann::json doc = trace_to_json(outcome.trace);
    doc["question"] = question;
    doc["termination"] = to_string(outcome.termination);
    if (outcome.answer) doc["answer"] = *outcome.answer;
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write trace: " + out_path);
    out << doc.dump(2) << "\n";
    std::cout << "trace: " << out_path << "\n";
  }
  return 0;
}

int cmd_synth(const SyntheticOptions& options, const std::string& out_path,
              const std::string& graph_out) {
  SyntheticResult result = gen_synthetic(options);
  save_dataset(result.dataset, result.graph->templates(), out_path);
  std::string graph_path = graph_out;
  if (graph_path.empty()) graph_path = out_path + ".graph.json";
  result.graph->save(graph_path);

  std::cout << "dataset=" << out_path << " graph=" << graph_path
            << " instances=" << result.dataset.instances.size()
            << " conflicts_planted=" << result.injected_conflict_ids.size()
            << " fault_plans=" << result.fault_plans.size() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"step-level constrained reasoning over edited knowledge"};
  app.require_subcommand(1);

  // eval
  auto* eval_cmd = app.add_subcommand(
      "eval", "run a search method over a benchmark dataset");
  CommonFlags eval_flags;
  std::string eval_method = "dfs";
  std::string eval_dataset;
  std::string eval_output_dir;
  eval_cmd->add_option("--method", eval_method,
                       "dfs | bfs | mello | parametric-only");
  eval_cmd->add_option("--dataset", eval_dataset, "benchmark JSON")->required();
  eval_cmd->add_option("--output-dir", eval_output_dir,
                       "where report.jsonl and summary.json go");
  add_common_flags(eval_cmd, eval_flags);

  // build-bench
  auto* bench_cmd = app.add_subcommand(
      "build-bench", "derive clean/hard benchmark subsets");
  std::string bench_dataset, bench_mode = "clean", bench_out, bench_exclude;
  bool bench_one_shot = false;
  bench_cmd->add_option("--dataset", bench_dataset, "benchmark JSON")
      ->required();
  bench_cmd->add_option("--mode", bench_mode, "clean | hard");
  bench_cmd->add_option("--out", bench_out, "output dataset path")->required();
  bench_cmd->add_option("--exclude", bench_exclude,
                        "hard mode: ids to drop (JSON id array or dataset)");
  bench_cmd->add_flag("--one-shot", bench_one_shot,
                      "clean mode: single removal pass instead of fixed point");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "dataset shape summary");
  std::string stats_dataset;
  stats_cmd->add_option("--dataset", stats_dataset, "benchmark JSON")
      ->required();

  // trace
  auto* trace_cmd = app.add_subcommand(
      "trace", "run one question and render the search tree");
  CommonFlags trace_flags;
  std::string trace_question, trace_edits, trace_method = "dfs",
              trace_out;
  trace_cmd->add_option("--question", trace_question, "question text")
      ->required();
  trace_cmd->add_option("--edits", trace_edits,
                        "JSON array of {subject, relation, object[, text]}");
  trace_cmd->add_option("--method", trace_method, "dfs | bfs");
  trace_cmd->add_option("--output", trace_out, "also write the trace as JSON");
  add_common_flags(trace_cmd, trace_flags);

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic benchmark plus its fact graph");
  SyntheticOptions synth_options;
  std::string synth_out, synth_graph_out;
  synth_cmd->add_option("--out", synth_out, "dataset output path")->required();
  synth_cmd->add_option("--graph-out", synth_graph_out,
                        "fact graph output path (default <out>.graph.json)");
  synth_cmd->add_option("--count", synth_options.count, "instances");
  synth_cmd->add_option("--seed", synth_options.seed, "rng seed");
  synth_cmd->add_option("--hops-min", synth_options.hops_min, "min hops");
  synth_cmd->add_option("--hops-max", synth_options.hops_max, "max hops");
  synth_cmd->add_option("--edits-min", synth_options.edits_min, "min edits");
  synth_cmd->add_option("--edits-max", synth_options.edits_max, "max edits");
  synth_cmd->add_option("--conflict-pairs", synth_options.conflict_pairs,
                        "planted cross-instance conflicts");
  synth_cmd->add_option("--name", synth_options.name, "dataset name prefix");
  synth_cmd->add_flag("--alias-edits", synth_options.alias_edits,
                      "plant a second complete chain per instance");
  synth_cmd->add_flag("--branch-edits", synth_options.branch_edits,
                      "plant dead-end branch edits");
  synth_cmd->add_flag("--fault-distractors", synth_options.fault_distractors,
                      "plant distractor edits with fault plans");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e); // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_cmd, eval_flags, eval_method, eval_dataset,
                      eval_output_dir);
    }
    if (bench_cmd->parsed()) {
      return cmd_build_bench(bench_dataset, bench_mode, bench_out,
                             bench_exclude, bench_one_shot);
    }
    if (stats_cmd->parsed()) return cmd_stats(stats_dataset);
    if (trace_cmd->parsed()) {
      return cmd_trace(trace_cmd, trace_flags, trace_question, trace_edits,
                       trace_method, trace_out);
    }
    if (synth_cmd->parsed()) {
      return cmd_synth(synth_options, synth_out, synth_graph_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
