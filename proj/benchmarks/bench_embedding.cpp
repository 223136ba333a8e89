#include "kedit/embedding.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

namespace {

std::vector<std::string> sample_sentences(std::size_t count) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(4, 10);
  std::uniform_int_distribution<int> ch('a', 'z');
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string sentence = "The";
    for (int w = 0; w < 8; ++w) {
      sentence += ' ';
      for (int k = len(rng); k > 0; --k)
        sentence.push_back(static_cast<char>(ch(rng)));
    }
    sentence += '.';
    out.push_back(std::move(sentence));
  }
  return out;
}

void BM_HashingEmbedOne(benchmark::State& state) {
  kedit::HashingEmbeddingProvider provider(
      static_cast<std::size_t>(state.range(0)));
  const auto sentences = sample_sentences(64);
  std::size_t i = 0;
  for (auto _ : state) {
    auto v = provider.embed_one(sentences[i++ % sentences.size()]);
    benchmark::DoNotOptimize(v.values.data());
  }
}
BENCHMARK(BM_HashingEmbedOne)->Arg(64)->Arg(256)->Arg(1024);

void BM_HashingEmbedBatch(benchmark::State& state) {
  kedit::HashingEmbeddingProvider provider(256);
  const auto sentences =
      sample_sentences(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto batch = provider.embed_batch(sentences);
    benchmark::DoNotOptimize(batch.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HashingEmbedBatch)->Arg(8)->Arg(64)->Arg(512);

void BM_CosineDistance(benchmark::State& state) {
  kedit::HashingEmbeddingProvider provider(
      static_cast<std::size_t>(state.range(0)));
  auto a = provider.embed_one("The capital of France is Paris.");
  auto b = provider.embed_one("Eiffel Tower is located in the country of France.");
  for (auto _ : state) {
    benchmark::DoNotOptimize(kedit::cosine_distance(a, b));
  }
}
BENCHMARK(BM_CosineDistance)->Arg(64)->Arg(256)->Arg(1024);

} // namespace
