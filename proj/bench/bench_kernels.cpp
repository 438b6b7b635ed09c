// Parallel kernels against their serial references.

#include <random>

#include <benchmark/benchmark.h>

#include "argmine/agreement.hpp"
#include "argmine/experiment.hpp"
#include "argmine/features.hpp"
#include "support/synthetic.hpp"

using namespace argmine;

namespace {

Continuum random_continuum(std::size_t m, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_int_distribution<int> cat(0, 4);
  Continuum c;
  c.length = length;
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<Unit> units;
    for (std::size_t t = 0; t < length;) {
      if (u(rng) < 0.08) {
        const std::size_t l = std::min(len(rng), length - t);
        units.push_back({t, t + l - 1, cat(rng)});
        t += l;
      } else {
        ++t;
      }
    }
    c.annotators.push_back(std::move(units));
  }
  return c;
}

const Corpus& bench_corpus() {
  static const Corpus c = [] {
    synth::Options o;
    o.documents = 120;
    o.topics = 3;
    o.aligned = false;
    return synth::make_corpus(o);
  }();
  return c;
}

const std::vector<int> kCats{0, 1, 2, 3, 4};

void BM_AlphaU(benchmark::State& state) {
  const auto c = random_continuum(3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(alpha_u(c, kCats));
}
void BM_AlphaU_Reference(benchmark::State& state) {
  const auto c = random_continuum(3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::alpha_u(c, kCats));
}
BENCHMARK(BM_AlphaU)->Arg(1000)->Arg(5000);
BENCHMARK(BM_AlphaU_Reference)->Arg(1000)->Arg(5000);

void BM_CorpusAlphaU(benchmark::State& state) {
  const auto units = collect_units(bench_corpus(), {"a1", "a2", "a3"}, kLogosTypes);
  for (auto _ : state) benchmark::DoNotOptimize(corpus_alpha_u(units, kCats, 20, 1));
}
void BM_CorpusAlphaU_Reference(benchmark::State& state) {
  const auto units = collect_units(bench_corpus(), {"a1", "a2", "a3"}, kLogosTypes);
  for (auto _ : state) benchmark::DoNotOptimize(reference::corpus_alpha_u(units, kCats, 20, 1));
}
BENCHMARK(BM_CorpusAlphaU);
BENCHMARK(BM_CorpusAlphaU_Reference);

struct ExtractionSetup {
  std::vector<std::size_t> ids;
  Vocabulary vocab;
  EmbeddingTable emb;
  FeatureConfig config;
  FeatureResources resources;

  ExtractionSetup() {
    const auto& c = bench_corpus();
    for (std::size_t i = 0; i < c.documents.size(); ++i) ids.push_back(i);
    vocab = build_vocabulary(c, ids, 2);
    emb = synth::make_embeddings(50, 40, 1);
    config.sets = FeatureSets::parse("014");
    resources.vocabulary = &vocab;
    resources.embeddings = &emb;
  }
};

void BM_ExtractCorpus(benchmark::State& state) {
  static const ExtractionSetup s;
  for (auto _ : state) benchmark::DoNotOptimize(extract_corpus(bench_corpus(), s.ids, s.config, s.resources));
}
void BM_ExtractCorpus_Reference(benchmark::State& state) {
  static const ExtractionSetup s;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::extract_corpus(bench_corpus(), s.ids, s.config, s.resources));
  }
}
BENCHMARK(BM_ExtractCorpus);
BENCHMARK(BM_ExtractCorpus_Reference);

void crossval(benchmark::State& state, bool parallel) {
  PerceptronOptions p;
  p.training.epochs = 3;
  const auto learner = make_perceptron_learner(p);
  FeatureConfig cfg;
  cfg.sets = FeatureSets::parse("01");
  const std::vector<FeatureConfig> configs{cfg};
  ScenarioOptions opts;
  opts.parallel = parallel;
  opts.alpha_permutations = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_crossval(bench_corpus(), configs, *learner, opts));
}
void BM_Crossval_Parallel(benchmark::State& state) { crossval(state, true); }
void BM_Crossval_Serial(benchmark::State& state) { crossval(state, false); }
BENCHMARK(BM_Crossval_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Crossval_Serial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
