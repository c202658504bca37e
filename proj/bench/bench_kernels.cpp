// Serial reference vs OpenMP kernels. Parallel variants take the worker count
// as the benchmark argument.

#include <fstream>
#include <random>
#include <thread>

#include <benchmark/benchmark.h>

#include "coinpulse/corpus/corpus.hpp"
#include "coinpulse/econometrics/correlation.hpp"
#include "coinpulse/econometrics/granger.hpp"
#include "coinpulse/econometrics/xcorr.hpp"
#include "coinpulse/netgraph/centrality.hpp"
#include "coinpulse/netgraph/graph.hpp"
#include "coinpulse/parallel.hpp"
#include "coinpulse/signals/classifier.hpp"
#include "coinpulse/signals/social_signal.hpp"

using namespace coinpulse;

namespace {

const std::filesystem::path kFixture = COINPULSE_FIXTURE_DIR;

std::vector<double> noise(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

struct Fixture {
  CoinRegistry registry;
  Corpus corpus;
  std::vector<std::string> texts;
  std::unique_ptr<LexiconClassifier> classifier;
  std::vector<ClassifierVerdict> verdicts;
  std::vector<std::string> coins;
  HourlyGrid grid;

  static const Fixture& get() {
    static const Fixture f;
    return f;
  }

 private:
  Fixture() : registry(CoinRegistry::load(kFixture / "registry.json")) {
    std::ifstream in(kFixture / "tweets.jsonl");
    corpus = index_corpus(parse_tweets(in).tweets, registry);
    for (const auto& t : corpus.tweets) texts.push_back(t.text);
    classifier = std::make_unique<LexiconClassifier>(Lexicon::load(kFixture / "lexicon.toml"), &registry);
    verdicts = classifier->classify(texts);
    for (const auto& c : registry.coins()) coins.push_back(c.id);
    grid.origin = corpus.tweets.front().created_at;
    for (const auto& t : corpus.tweets) grid.origin = std::min(grid.origin, t.created_at);
    grid.origin = std::chrono::floor<Hours>(grid.origin) + Hours{24};
    grid.hours = 24 * 7 * 30 - 24;
  }
};

WeightedGraph random_graph(std::size_t n, double p) {
  std::mt19937_64 rng(n);
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> w(1, 5);
  WeightedGraph g(Directedness::directed);
  for (std::size_t i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && edge(rng)) g.add_edge("n" + std::to_string(i), "n" + std::to_string(j), w(rng));
  return g;
}

const Adjacency& bench_graph() {
  static const Adjacency adj = to_adjacency(random_graph(600, 0.01));
  return adj;
}

struct MatrixInputs {
  std::vector<AlignedSeries> hourly;
  std::vector<AlignedSeries> weekly;
  std::vector<std::string> order;
};

const MatrixInputs& matrix_inputs() {
  static const MatrixInputs m = [] {
    MatrixInputs out;
    for (int i = 0; i < 30; ++i) {
      const std::string id = "C" + std::to_string(i);
      out.hourly.push_back({id, Timestamp{}, noise(100 + i, 5000)});
      out.weekly.push_back({id, Timestamp{}, noise(200 + i, 52)});
      out.order.push_back(id);
    }
    return out;
  }();
  return m;
}

template <typename Fn>
void run_parallel(benchmark::State& state, Fn&& fn) {
  set_worker_count(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fn());
  set_worker_count(0);
}

void BM_classify_serial(benchmark::State& state) {
  const auto& f = Fixture::get();
  for (auto _ : state) benchmark::DoNotOptimize(serial::classify(*f.classifier, f.texts));
}
void BM_classify_parallel(benchmark::State& state) {
  const auto& f = Fixture::get();
  run_parallel(state, [&] { return f.classifier->classify(f.texts); });
}

void BM_aggregate_serial(benchmark::State& state) {
  const auto& f = Fixture::get();
  for (auto _ : state) benchmark::DoNotOptimize(serial::aggregate_signal_counts(f.corpus, f.verdicts, f.coins, f.grid));
}
void BM_aggregate_parallel(benchmark::State& state) {
  const auto& f = Fixture::get();
  run_parallel(state, [&] { return aggregate_signal_counts(f.corpus, f.verdicts, f.coins, f.grid); });
}

void BM_granger_scan_serial(benchmark::State& state) {
  const auto x = noise(1, 5000);
  const auto y = noise(2, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(serial::granger_scan(x, y, 24));
}
void BM_granger_scan_parallel(benchmark::State& state) {
  const auto x = noise(1, 5000);
  const auto y = noise(2, 5000);
  run_parallel(state, [&] { return granger_scan(x, y, 24); });
}

void BM_xcorr_scan_serial(benchmark::State& state) {
  const auto x = noise(3, 5000);
  const auto y = noise(4, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(serial::cross_correlation_scan(x, y, 24));
}
void BM_xcorr_scan_parallel(benchmark::State& state) {
  const auto x = noise(3, 5000);
  const auto y = noise(4, 5000);
  run_parallel(state, [&] { return cross_correlation_scan(x, y, 24); });
}

void BM_matrix_serial(benchmark::State& state) {
  const auto& m = matrix_inputs();
  for (auto _ : state) benchmark::DoNotOptimize(serial::return_correlation_matrix(m.hourly, m.weekly, m.order, true));
}
void BM_matrix_parallel(benchmark::State& state) {
  const auto& m = matrix_inputs();
  run_parallel(state, [&] { return return_correlation_matrix(m.hourly, m.weekly, m.order, true); });
}

void BM_betweenness_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::betweenness(bench_graph()));
}
void BM_betweenness_parallel(benchmark::State& state) {
  run_parallel(state, [] { return betweenness(bench_graph()); });
}

void BM_closeness_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::closeness(bench_graph()));
}
void BM_closeness_parallel(benchmark::State& state) {
  run_parallel(state, [] { return closeness(bench_graph()); });
}

void worker_args(benchmark::internal::Benchmark* b) {
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int w = 1; w <= hw; w *= 2) b->Arg(w);
  if ((hw & (hw - 1)) != 0) b->Arg(hw);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_classify_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_classify_parallel)->Apply(worker_args);
BENCHMARK(BM_aggregate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_aggregate_parallel)->Apply(worker_args);
BENCHMARK(BM_granger_scan_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_granger_scan_parallel)->Apply(worker_args);
BENCHMARK(BM_xcorr_scan_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_xcorr_scan_parallel)->Apply(worker_args);
BENCHMARK(BM_matrix_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matrix_parallel)->Apply(worker_args);
BENCHMARK(BM_betweenness_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_betweenness_parallel)->Apply(worker_args);
BENCHMARK(BM_closeness_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_closeness_parallel)->Apply(worker_args);

BENCHMARK_MAIN();
