// Serial reference vs OpenMP kernels: split search and corpus evaluation.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "bareprover/gbdt.hpp"
#include "bareprover/harness.hpp"

using namespace bare;

namespace {

struct SplitFixture {
  Dataset data;
  std::vector<Column> columns;
  std::vector<GradientPair> grads;
  std::vector<std::int32_t> node_of;
  std::vector<NodeTotals> totals;

  explicit SplitFixture(std::size_t rows) {
    std::mt19937_64 rng(42);
    data.bits = 12;
    const std::uint32_t dim = (1u << 13) + 3;
    for (std::size_t r = 0; r < rows; ++r) {
      std::map<std::uint32_t, std::uint32_t> m;
      for (int k = 0; k < 30; ++k) m[static_cast<std::uint32_t>(rng() % dim)] += 1 + rng() % 3;
      FeatureVector fv{12, {m.begin(), m.end()}};
      data.add(fv, static_cast<int>(rng() % 2));
    }
    columns = build_columns(data);
    totals.resize(8);
    for (std::size_t r = 0; r < rows; ++r) {
      double p = static_cast<double>(rng() % 1000) / 1000.0;
      grads.push_back({p - data.labels[r], p * (1 - p)});
      node_of.push_back(static_cast<std::int32_t>(r % 8));
      auto& t = totals[r % 8];
      t.g += grads.back().g, t.h += grads.back().h, ++t.n;
    }
  }
  SplitSearch search() const { return {columns, grads, node_of, totals, 1.0, 1}; }
};

const SplitFixture& split_fixture() {
  static const SplitFixture f(20000);
  return f;
}

void BM_SplitSearchSerial(benchmark::State& state) {
  auto s = split_fixture().search();
  for (auto _ : state) benchmark::DoNotOptimize(find_best_splits_serial(s));
}

void BM_SplitSearchOpenMP(benchmark::State& state) {
  auto s = split_fixture().search();
  for (auto _ : state) benchmark::DoNotOptimize(find_best_splits(s, static_cast<int>(state.range(0))));
}

const std::vector<CorpusProblem>& corpus() {
  static const auto c = load_corpus(BAREPROVER_CORPUS_DIR);
  return c;
}

Strategy e0(const CorpusProblem&) { return e0_strategy(); }

void BM_CorpusSerial(benchmark::State& state) {
  EvalOptions opts{Limits::selections(200), 0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_corpus_serial(corpus(), e0, opts));
}

void BM_CorpusOpenMP(benchmark::State& state) {
  EvalOptions opts{Limits::selections(200), 0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_corpus(corpus(), e0, opts));
}

}  // namespace

BENCHMARK(BM_SplitSearchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SplitSearchOpenMP)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorpusSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorpusOpenMP)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
