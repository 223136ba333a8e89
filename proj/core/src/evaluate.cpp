#include "kedit/evaluate.hpp"

#include "kedit/text.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace kedit {

const char* to_string(Method method) {
  switch (method) {
    case Method::Dfs: return "dfs";
    case Method::Bfs: return "bfs";
    case Method::Mello: return "mello";
    case Method::ParametricOnly: return "parametric-only";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "dfs") return Method::Dfs;
  if (name == "bfs") return Method::Bfs;
  if (name == "mello") return Method::Mello;
  if (name == "parametric-only" || name == "parametric_only")
    return Method::ParametricOnly;
  return std::nullopt;
}

bool answer_matches(const std::string& predicted, const Instance& instance) {
  const std::string p = normalize_entity(predicted);
  if (p == normalize_entity(instance.new_answer)) return true;
  for (const auto& alias : instance.new_answer_aliases) {
    if (p == normalize_entity(alias)) return true;
  }
  return false;
}

EvalReport evaluate(Method method, const Dataset& dataset,
                    GeneratorBackend& backend,
                    const VerifierFactory& verifier_factory,
                    std::shared_ptr<EmbeddingProvider> provider,
                    const SentenceTemplates& templates,
                    const EvalOptions& options) {
  options.limits.validate();

  EvalReport report;
  report.method = to_string(method);
  report.dataset = dataset.name;
  report.results.resize(dataset.instances.size());

  struct Job {
    std::size_t instance_index;
    std::shared_ptr<const KnowledgeStore> store;
  };
  std::vector<Job> jobs;
  for (const auto& batch : make_batches(dataset, options.batch_size,
                                        std::move(provider),
                                        options.shuffle_seed)) {
    for (std::size_t index : batch.instance_indices) {
      jobs.push_back({index, batch.store});
    }
  }

  auto run_one = [&](const Job& job) {
    const Instance& instance = dataset.instances[job.instance_index];
    InstanceResult& result = report.results[job.instance_index];
    result.id = instance.id;
    try {
      auto verifier = verifier_factory(instance);
      const std::string& question = instance.questions.front();
      Outcome outcome;
      switch (method) {
        case Method::Dfs:
          outcome = dfs(question, *job.store, backend, *verifier,
                        options.limits, options.dfs);
          break;
        case Method::Bfs:
          outcome =
              bfs(question, *job.store, backend, *verifier, options.limits);
          break;
        case Method::Mello:
          outcome =
              mello(question, *job.store, backend, templates, options.limits);
          break;
        case Method::ParametricOnly:
          outcome = parametric_only(question, backend, options.limits);
          break;
      }
      result.predicted = outcome.answer;
      result.termination = to_string(outcome.termination);
      result.totals = outcome.trace.totals;
      result.correct =
          result.predicted && answer_matches(*result.predicted, instance);
    } catch (const std::exception& e) {
      result.flagged = true;
      result.correct = false;
      result.termination = "error";
      result.note = e.what();
    }
    if (options.stable_output) result.totals.wall_ms = 0.0;
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min(options.parallelism, jobs.size()));
  if (workers <= 1) {
    for (const auto& job : jobs) run_one(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t j = next.fetch_add(1);
          if (j >= jobs.size()) return;
          run_one(jobs[j]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  EvalSummary& s = report.summary;
  s.instances = report.results.size();
  for (const auto& r : report.results) {
    if (r.predicted) ++s.answered;
    if (r.correct) ++s.correct;
    if (r.flagged) ++s.flagged;
    s.mean_expansions += static_cast<double>(r.totals.expansions);
    s.mean_generator_calls += static_cast<double>(r.totals.generator_calls);
    s.mean_wall_ms += r.totals.wall_ms;
    s.total_backtracks += r.totals.backtracks;
  }
  if (s.instances > 0) {
    const double n = static_cast<double>(s.instances);
    s.accuracy = static_cast<double>(s.correct) / n;
    s.mean_expansions /= n;
    s.mean_generator_calls /= n;
    s.mean_wall_ms /= n;
  }
  return report;
}

nlohmann::json result_to_json(const InstanceResult& result,
                              const std::string& method) {
  nlohmann::json j{{"id", result.id},
                   {"method", method},
                   {"correct", result.correct},
                   {"termination", result.termination},
                   {"expansions", result.totals.expansions},
                   {"generator_calls", result.totals.generator_calls},
                   {"verifier_calls", result.totals.verifier_calls},
                   {"backtracks", result.totals.backtracks},
                   {"unparsable_incidents", result.totals.unparsable_incidents},
                   {"wall_ms", result.totals.wall_ms},
                   {"flagged", result.flagged}};
  if (result.predicted) j["predicted"] = *result.predicted;
  if (!result.note.empty()) j["note"] = result.note;
  return j;
}

nlohmann::json summary_to_json(const EvalReport& report) {
  return {{"method", report.method},
          {"dataset", report.dataset},
          {"instances", report.summary.instances},
          {"answered", report.summary.answered},
          {"correct", report.summary.correct},
          {"flagged", report.summary.flagged},
          {"accuracy", report.summary.accuracy},
          {"mean_expansions", report.summary.mean_expansions},
          {"mean_generator_calls", report.summary.mean_generator_calls},
          {"mean_wall_ms", report.summary.mean_wall_ms},
          {"total_backtracks", report.summary.total_backtracks}};
}

void write_report_jsonl(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  for (const auto& result : report.results) {
    out << result_to_json(result, report.method).dump() << '\n';
  }
}

void write_report_summary(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary: " + path);
  out << summary_to_json(report).dump(2) << '\n';
}

} // namespace kedit
