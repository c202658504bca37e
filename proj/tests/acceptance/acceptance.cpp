// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance --coinpulse PATH --fixture DIR --golden DIR [--only NAME]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "coinpulse/cli/output.hpp"
#include "coinpulse/cli/pipeline.hpp"
#include "coinpulse/cli/report.hpp"
#include "coinpulse/corpus/corpus.hpp"
#include "coinpulse/econometrics/adf.hpp"
#include "coinpulse/econometrics/granger.hpp"
#include "coinpulse/econometrics/special.hpp"
#include "coinpulse/econometrics/xcorr.hpp"
#include "coinpulse/netgraph/centrality.hpp"
#include "coinpulse/netgraph/graph.hpp"
#include "coinpulse/signals/social_signal.hpp"
#include "oracles.hpp"

using namespace coinpulse;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> normals(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Outcome granger_recovery() {
  const auto t0 = Clock::now();
  int forward = 0;
  int reverse = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const std::size_t n = 2000;
    const auto x = normals(rng, n);
    const auto e = normals(rng, n);
    std::vector<double> y(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      y[t] = e[t];
      if (t >= 1) y[t] += 0.5 * y[t - 1];
      if (t >= 2) y[t] += 0.8 * x[t - 2];
    }
    forward += granger_test(x, y, 2).p_value < 0.01;
    reverse += granger_test(y, x, 2).p_value < 0.05;
  }
  const double secs = seconds_since(t0);
  return {forward >= 95 && reverse <= 10 && secs < 10.0,
          fmt::format("x->y p<0.01 in {}/100, y->x p<0.05 in {}/100, {:.2f}s", forward, reverse, secs)};
}

Outcome granger_size() {
  std::vector<double> p;
  for (int seed = 0; seed < 500; ++seed) {
    std::mt19937_64 rng(50000 + seed);
    const auto x = normals(rng, 1000);
    const auto y = normals(rng, 1000);
    p.push_back(granger_test(x, y, 2).p_value);
  }
  const double rate =
      static_cast<double>(std::count_if(p.begin(), p.end(), [](double v) { return v < 0.05; })) / p.size();
  std::sort(p.begin(), p.end());
  double ks = 0.0;
  const double n = static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    ks = std::max({ks, (i + 1) / n - p[i], p[i] - i / n});
  }
  return {rate >= 0.03 && rate <= 0.07 && ks < 0.08, fmt::format("rejection rate {:.3f}, KS {:.4f}", rate, ks)};
}

Outcome xcorr_oracle() {
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(7000 + seed);
    const auto x = normals(rng, 256);
    const auto y = normals(rng, 256);
    const auto scan = cross_correlation_scan(x, y, 24);
    for (const auto& row : scan) {
      const double ref = static_cast<double>(oracle::cross_correlation(x, y, row.lag));
      worst = std::max(worst, row.gamma ? std::fabs(*row.gamma - ref) : INFINITY);
    }
  }
  // y leads x by two steps.
  std::mt19937_64 rng(77);
  const auto base = normals(rng, 258);
  const std::vector<double> x(base.begin(), base.begin() + 256);
  const std::vector<double> y(base.begin() + 2, base.end());
  const auto best = best_lag_index(cross_correlation_scan(x, y, 24));
  const bool shift_ok = best && *best == 2;
  return {worst <= 1e-12 && shift_ok,
          fmt::format("max |delta| {:.3g} over 100 pairs x 25 lags, planted shift best lag {}", worst,
                      best ? std::to_string(*best) : "none")};
}

Outcome adf_size_power() {
  const auto t0 = Clock::now();
  int walk_rejects = 0;
  int ar_rejects = 0;
  for (int seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(90000 + seed);
    auto walk = normals(rng, 500);
    std::partial_sum(walk.begin(), walk.end(), walk.begin());
    walk_rejects += adf_test(walk).reject_5;
    const auto e = normals(rng, 500);
    std::vector<double> ar(500);
    ar[0] = e[0];
    for (std::size_t t = 1; t < ar.size(); ++t) ar[t] = 0.5 * ar[t - 1] + e[t];
    ar_rejects += adf_test(ar).reject_5;
  }
  const double secs = seconds_since(t0);
  return {walk_rejects <= 20 && ar_rejects >= 180 && secs < 30.0,
          fmt::format("random walk rejected {}/200, AR(0.5) rejected {}/200, {:.2f}s", walk_rejects, ar_rejects, secs)};
}

Outcome special_functions() {
  const std::vector<double> fs_{0.01, 0.3, 0.9, 1.7, 3.0, 6.5, 12.0, 25.0, 60.0, 150.0};
  const std::vector<std::pair<int, int>> dofs{{1, 5}, {2, 40}, {3, 997}, {12, 12}, {24, 1927}};
  double worst = 0.0;
  std::size_t points = 0;
  for (const auto& [d1, d2] : dofs) {
    for (const double f : fs_) {
      worst = std::max(worst, std::fabs(f_pvalue(f, d1, d2) - static_cast<double>(oracle::f_upper_tail(f, d1, d2))));
      ++points;
    }
  }
  double median_err = 0.0;
  for (const int d : {1, 2, 3, 7, 10, 30, 100, 1000, 5000}) {
    median_err = std::max(median_err, std::fabs(f_pvalue(1.0, d, d) - 0.5));
  }
  return {points == 50 && worst <= 1e-8 && median_err <= 1e-12,
          fmt::format("{} grid points max |delta| {:.3g}; max |F(1;d,d) - 0.5| {:.3g}", points, worst, median_err)};
}

WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p, Directedness d) {
  WeightedGraph g(d);
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> w(1, 5);
  for (std::size_t i = 0; i < n; ++i) g.add_node(fmt::format("v{:02}", i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (d == Directedness::undirected && j < i)) continue;
      if (edge(rng)) g.add_edge(fmt::format("v{:02}", i), fmt::format("v{:02}", j), w(rng));
    }
  }
  return g;
}

Outcome centrality_oracles() {
  double pr_worst = 0.0;
  double sum_worst = 0.0;
  double bc_worst = 0.0;
  std::size_t small = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(300 + seed);
    const std::size_t n = seed < 10 ? 4 + seed % 5 : 9 + static_cast<std::size_t>(rng() % 56);
    const auto d = seed % 2 ? Directedness::directed : Directedness::undirected;
    const auto g = random_graph(rng, n, n <= 8 ? 0.45 : 0.12, d);
    const auto adj = to_adjacency(g);
    const auto pr = pagerank(adj);
    const auto ref = oracle::dense_pagerank(g, 0.85L);
    for (std::size_t i = 0; i < n; ++i) pr_worst = std::max(pr_worst, std::fabs(pr[i] - static_cast<double>(ref[i])));
    sum_worst = std::max(sum_worst, std::fabs(std::accumulate(pr.begin(), pr.end(), 0.0) - 1.0));
    if (n <= 8) {
      ++small;
      const auto bc = betweenness(adj);
      const auto bref = oracle::enumerated_betweenness(g);
      for (std::size_t i = 0; i < n; ++i) bc_worst = std::max(bc_worst, std::fabs(bc[i] - static_cast<double>(bref[i])));
    }
  }
  // Betweenness values are ratios of path counts; 1e-12 separates them from
  // any wrong rational with small denominators.
  return {pr_worst <= 1e-8 && sum_worst <= 1e-9 && bc_worst <= 1e-12 && small == 10,
          fmt::format("PageRank max |delta| {:.3g}, max |sum - 1| {:.3g}; betweenness max |delta| {:.3g} on {} graphs "
                      "with <= 8 nodes",
                      pr_worst, sum_worst, bc_worst, small)};
}

Outcome network_identities(const fs::path& fixture) {
  const auto registry = CoinRegistry::load(fixture / "registry.json");
  std::ifstream in(fixture / "tweets.jsonl");
  auto load = parse_tweets(in);
  const auto corpus = index_corpus(std::move(load.tweets), registry);
  const auto g = build_comention_network(corpus.mentions);
  double expected = 0.0;
  for (const auto& m : corpus.mentions) expected += static_cast<double>(m.size()) * (m.size() ? m.size() - 1 : 0) / 2.0;
  const bool total_ok = g.total_weight() == expected;

  bool monotone = true;
  std::set<std::string> prev = g.nodes();
  std::string sizes;
  for (const double theta : {0.005, 0.01, 0.02}) {
    const auto f = degree_share_filter(g, theta);
    monotone = monotone && std::includes(prev.begin(), prev.end(), f.nodes().begin(), f.nodes().end());
    prev = f.nodes();
    sizes += fmt::format(" {}", f.node_count());
  }
  return {total_ok && monotone && corpus.size() == 10000,
          fmt::format("{} tweets, total weight {} vs sum C(m,2) {}; nodes kept at theta .005/.01/.02:{}",
                      corpus.size(), g.total_weight(), expected, sizes)};
}

Outcome social_signal_identities() {
  auto c = [](std::int64_t b, std::int64_t nb, const char* id = "BTC") {
    return SignalCounts{id, Timestamp{} + Hours{24}, b, nb};
  };
  bool ok = social_signal(c(0, 0)) == 1.0 && social_signal(c(3, 1)) == 2.0 && social_signal(c(0, 9)) == 0.1;
  ok = ok && social_signal_with_market(c(2, 1), c(0, 0, "MARKET")) == 1.5 &&
       social_signal_with_market(c(0, 0), c(4, 9, "MARKET")) == 0.5 &&
       social_signal_with_market(c(3, 1), c(1, 1, "MARKET")) == 5.0 / 3.0;
  std::mt19937_64 rng(1000);
  int reduced = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = c(static_cast<std::int64_t>(rng() % 10000), static_cast<std::int64_t>(rng() % 10000));
    reduced += social_signal_with_market(x, c(0, 0, "MARKET")) == social_signal(x);
  }
  return {ok && reduced == 1000, fmt::format("6 substitution examples {}, zero-market reduction {}/1000",
                                             ok ? "exact" : "WRONG", reduced)};
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Compares `dir` with the golden set; returns a mismatch description or "".
std::string compare_with_golden(const fs::path& dir, const fs::path& golden) {
  std::set<std::string> got;
  std::set<std::string> want;
  for (const auto& e : fs::directory_iterator(dir)) got.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(golden)) want.insert(e.path().filename().string());
  if (got != want) return fmt::format("file sets differ ({} vs {} golden)", got.size(), want.size());
  for (const auto& name : want) {
    if (name == "manifest.json") {
      const auto a = manifest_without_timings(nlohmann::json::parse(read_all(dir / name)));
      const auto b = manifest_without_timings(nlohmann::json::parse(read_all(golden / name)));
      if (a != b) return "manifest.json differs";
    } else if (read_all(dir / name) != read_all(golden / name)) {
      return name + " differs";
    }
  }
  return "";
}

Outcome end_to_end(const fs::path& binary, const fs::path& fixture, const fs::path& golden) {
  if (!fs::exists(golden / "manifest.json")) return {false, "no golden outputs at " + golden.string()};
  const auto scratch = fs::temp_directory_path() / fmt::format("coinpulse_acceptance_{}", ::getpid());
  fs::remove_all(scratch);
  const auto t0 = Clock::now();
  std::string problems;
  for (int run = 0; run < 2; ++run) {
    const auto out = scratch / fmt::format("run{}", run);
    const auto cmd = fmt::format("\"{}\" --config \"{}\" --out \"{}\" all > \"{}\" 2>&1", binary.string(),
                                 (fixture / "config.toml").string(), out.string(), (scratch / "log.txt").string());
    fs::create_directories(scratch);
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      problems += fmt::format(" run {} exited {};", run + 1, rc);
      continue;
    }
    const auto diff = compare_with_golden(out, golden);
    if (!diff.empty()) problems += fmt::format(" run {}: {};", run + 1, diff);
  }
  const double secs = seconds_since(t0);
  fs::remove_all(scratch);
  const std::size_t files = static_cast<std::size_t>(
      std::distance(fs::directory_iterator(golden), fs::directory_iterator{}));
  if (secs >= 60.0) problems += fmt::format(" took {:.1f}s;", secs);
  return {problems.empty(), problems.empty()
                                ? fmt::format("2 runs byte-identical to {} golden files, {:.2f}s", files, secs)
                                : "mismatch:" + problems};
}

Outcome banding() {
  const std::vector<double> bands{0.01, 0.05, 0.1};
  const auto a = significance_band(0.001, bands);
  const auto b = significance_band(0.043, bands);
  const auto c = significance_band(0.111, bands);
  return {a == "<0.01" && b == "<0.05" && c.empty(),
          fmt::format("0.001 -> \"{}\", 0.043 -> \"{}\", 0.111 -> \"{}\"", a, b, c)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coinpulse acceptance checks"};
  std::string binary;
  std::string fixture;
  std::string golden;
  std::string only;
  app.add_option("--coinpulse", binary, "coinpulse executable")->required();
  app.add_option("--fixture", fixture, "synthetic fixture directory")->required();
  app.add_option("--golden", golden, "golden output directory")->required();
  app.add_option("--only", only, "run a single check by name");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"granger_recovery", granger_recovery},
      {"granger_size", granger_size},
      {"xcorr_oracle", xcorr_oracle},
      {"adf_size_power", adf_size_power},
      {"special_functions", special_functions},
      {"centrality_oracles", centrality_oracles},
      {"network_identities", [&] { return network_identities(fixture); }},
      {"social_signal_identities", social_signal_identities},
      {"end_to_end_determinism", [&] { return end_to_end(binary, fixture, golden); }},
      {"significance_banding", banding},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    if (!only.empty() && name != only) continue;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
