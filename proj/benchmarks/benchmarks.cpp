#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "wvenrich/classify.hpp"
#include "wvenrich/enrichment.hpp"

namespace {

using namespace wvenrich;

// Zipf-ish short documents over a vocabulary of `vocab` tokens.
std::vector<Document> make_docs(std::size_t count, std::size_t vocab,
                                std::size_t classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  docs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t c = rng() % classes;
    std::string text;
    for (int w = 0; w < 40; ++w) {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const auto t = static_cast<std::size_t>(std::pow(static_cast<double>(vocab), u)) - 1;
      text += "w" + std::to_string((t + (rng() % 4 == 0 ? c * 7 : 0)) % vocab) + " ";
    }
    docs.push_back(Document::make("d" + std::to_string(i), text, {"c" + std::to_string(c)}));
  }
  return docs;
}

EmbeddingModel make_model(std::size_t tokens, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 1.0f);
  EmbeddingModel m(dim);
  std::vector<float> v(dim);
  for (std::size_t t = 0; t < tokens; ++t) {
    for (auto& x : v) x = g(rng);
    m.add("w" + std::to_string(t), v);
  }
  return m;
}

std::vector<LabeledVector> labeled(const std::vector<Document>& docs, const Vocabulary& vocab) {
  std::vector<LabeledVector> out;
  for (const auto& d : docs) out.push_back({vectorize(d.tokens, vocab), d.primary_label()});
  return out;
}

void BM_NearestNeighbors(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)), 100, 1);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_neighbors(model, model.token(q++ % model.size()), 3));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NearestNeighbors)->Arg(1000)->Arg(10000)->Arg(50000);

void BM_Enrich(benchmark::State& state) {
  const auto docs = make_docs(2000, 8000, 20, 2);
  const auto vocab = build_vocabulary(std::span(docs).first(1800));
  const auto model = make_model(8000, 100, 3);
  const NeighborCache cache(model);
  const Enricher cached(vocab, cache, {3, 3});
  const bool use_cache = state.range(0) != 0;
  std::size_t i = 1800;
  for (auto _ : state) {
    const auto& tokens = docs[i].tokens;
    if (use_cache) {
      benchmark::DoNotOptimize(cached(tokens));
    } else {
      benchmark::DoNotOptimize(enrich(tokens, vocab, model, {3, 3}));
    }
    i = i + 1 == docs.size() ? 1800 : i + 1;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Enrich)->Arg(0)->Arg(1);

void BM_MnbTrain(benchmark::State& state) {
  const auto docs = make_docs(3000, 8000, 90, 4);
  const auto vocab = build_vocabulary(docs);
  const auto data = labeled(docs, vocab);
  for (auto _ : state) benchmark::DoNotOptimize(train_mnb(data));
}
BENCHMARK(BM_MnbTrain)->Unit(benchmark::kMillisecond);

void BM_MnbPredict(benchmark::State& state) {
  const auto docs = make_docs(3000, 8000, 90, 5);
  const auto vocab = build_vocabulary(docs);
  const auto data = labeled(docs, vocab);
  const auto model = train_mnb(data);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(predict_mnb(model, data[i++ % data.size()].vector));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MnbPredict);

void BM_SvmTrain(benchmark::State& state) {
  const auto docs = make_docs(static_cast<std::size_t>(state.range(0)), 8000,
                              static_cast<std::size_t>(state.range(1)), 6);
  const auto vocab = build_vocabulary(docs);
  const auto data = labeled(docs, vocab);
  for (auto _ : state) benchmark::DoNotOptimize(train_svm_ovo(data));
}
BENCHMARK(BM_SvmTrain)->Args({1000, 10})->Args({3000, 30})->Unit(benchmark::kMillisecond);

void BM_SvmPredict(benchmark::State& state) {
  const auto docs = make_docs(3000, 8000, 30, 7);
  const auto vocab = build_vocabulary(docs);
  const auto data = labeled(docs, vocab);
  const auto model = train_svm_ovo(data);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(predict_svm(model, data[i++ % data.size()].vector));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SvmPredict);

void BM_SkipgramEpoch(benchmark::State& state) {
  const auto docs = make_docs(2000, 5000, 10, 8);
  std::vector<std::vector<std::string>> sentences;
  std::size_t words = 0;
  for (const auto& d : docs) {
    sentences.push_back(d.tokens);
    words += d.tokens.size();
  }
  SkipgramParams p;
  p.epochs = 1;
  p.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_skipgram(sentences, p));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * words));
}
BENCHMARK(BM_SkipgramEpoch)->Arg(1)->Arg(2)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
