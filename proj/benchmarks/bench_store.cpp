#include "kedit/store.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace {

std::vector<kedit::EditedFact> random_facts(std::size_t count) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(4, 9);
  std::uniform_int_distribution<int> ch('a', 'z');
  auto word = [&] {
    std::string w;
    for (int k = len(rng); k > 0; --k) w.push_back(static_cast<char>(ch(rng)));
    return w;
  };

  std::vector<kedit::EditedFact> facts;
  for (std::size_t i = 0; i < count; ++i) {
    kedit::EditedFact fact;
    fact.triple = kedit::Triple{word(), "relates-to", word()};
    fact.text = "The " + word() + " of " + fact.triple.subject + " is " +
                fact.triple.object + ".";
    fact.source_instance = "case-" + std::to_string(i);
    facts.push_back(std::move(fact));
  }
  return facts;
}

void BM_StoreBuild(benchmark::State& state) {
  const auto facts = random_facts(static_cast<std::size_t>(state.range(0)));
  auto provider = std::make_shared<kedit::HashingEmbeddingProvider>(256);
  for (auto _ : state) {
    auto store = kedit::KnowledgeStore::build(facts, provider);
    benchmark::DoNotOptimize(store.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StoreBuild)->Arg(10)->Arg(100)->Arg(1000);

void BM_StoreRetrieveTop5(benchmark::State& state) {
  auto provider = std::make_shared<kedit::HashingEmbeddingProvider>(256);
  auto store = kedit::KnowledgeStore::build(
      random_facts(static_cast<std::size_t>(state.range(0))), provider);
  const std::string query = "The capital of France is Paris.";
  for (auto _ : state) {
    auto hits = store.retrieve_top_n(query, 5);
    benchmark::DoNotOptimize(hits.data());
  }
}
BENCHMARK(BM_StoreRetrieveTop5)->Arg(10)->Arg(100)->Arg(1000)->Arg(10000);

} // namespace
