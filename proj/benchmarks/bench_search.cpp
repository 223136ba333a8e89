#include "kedit/search.hpp"

#include "kedit/constraints.hpp"
#include "kedit/oracle.hpp"
#include "kedit/store.hpp"
#include "kedit/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <memory>

namespace {

// One synthetic instance solved end to end against the oracle: a realistic
// unit of work (generation, retrieval, four-way verification per node).
struct SearchSetup {
  kedit::SyntheticResult world;
  std::unique_ptr<kedit::OracleBackend> backend;
  std::unique_ptr<kedit::RuleVerifier> verifier;
  std::shared_ptr<kedit::KnowledgeStore> store;
  std::string question;
  kedit::SearchLimits limits;

  explicit SearchSetup(std::size_t hops) {
    kedit::SyntheticOptions options;
    options.seed = 13;
    options.count = 1;
    options.hops_min = hops;
    options.hops_max = hops;
    world = kedit::gen_synthetic(options);
    backend = std::make_unique<kedit::OracleBackend>(world.graph);
    verifier =
        std::make_unique<kedit::RuleVerifier>(world.graph->templates());
    const auto& instance = world.dataset.instances.front();
    store = std::make_shared<kedit::KnowledgeStore>(kedit::KnowledgeStore::build(
        instance.edits, std::make_shared<kedit::HashingEmbeddingProvider>(128)));
    question = instance.questions.front();
  }
};

void BM_DfsOracle(benchmark::State& state) {
  SearchSetup setup(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto outcome = kedit::dfs(setup.question, *setup.store, *setup.backend,
                              *setup.verifier, setup.limits);
    benchmark::DoNotOptimize(outcome.answer);
  }
}
BENCHMARK(BM_DfsOracle)->Arg(2)->Arg(3)->Arg(4);

void BM_BfsOracle(benchmark::State& state) {
  SearchSetup setup(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto outcome = kedit::bfs(setup.question, *setup.store, *setup.backend,
                              *setup.verifier, setup.limits);
    benchmark::DoNotOptimize(outcome.answer);
  }
}
BENCHMARK(BM_BfsOracle)->Arg(2)->Arg(4);

void BM_ProposeOneNode(benchmark::State& state) {
  SearchSetup setup(3);
  for (auto _ : state) {
    kedit::SearchTotals totals;
    bool dead_end = false;
    auto candidates =
        kedit::propose(setup.question, {}, *setup.store, *setup.backend,
                       *setup.verifier, setup.limits, totals, dead_end);
    benchmark::DoNotOptimize(candidates.data());
  }
}
BENCHMARK(BM_ProposeOneNode);

} // namespace

BENCHMARK_MAIN();
