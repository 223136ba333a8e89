#include "kedit/templates.hpp"

#include <benchmark/benchmark.h>

#include <string>

namespace {

void BM_TemplateRenderTriple(benchmark::State& state) {
  auto templates = kedit::SentenceTemplates::defaults();
  kedit::Triple triple{"France", "capital-of", "Paris"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(templates.render(triple));
  }
}
BENCHMARK(BM_TemplateRenderTriple);

void BM_TemplateParseHit(benchmark::State& state) {
  auto templates = kedit::SentenceTemplates::defaults();
  const std::string sentence = "The capital of France is Paris.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(templates.parse(sentence));
  }
}
BENCHMARK(BM_TemplateParseHit);

void BM_TemplateParseMiss(benchmark::State& state) {
  auto templates = kedit::SentenceTemplates::defaults();
  // No registered pattern matches, so every candidate is tried and rejected.
  const std::string sentence =
      "Quarterly revenue guidance was revised downward on Tuesday.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(templates.parse(sentence));
  }
}
BENCHMARK(BM_TemplateParseMiss);

} // namespace
