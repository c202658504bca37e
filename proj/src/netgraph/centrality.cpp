#include "coinpulse/netgraph/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include <fmt/format.h>

#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"

namespace coinpulse {

std::string_view to_string(CentralityMetric m) {
  switch (m) {
    case CentralityMetric::pagerank: return "pagerank";
    case CentralityMetric::betweenness: return "betweenness";
    case CentralityMetric::closeness: return "closeness";
  }
  return "pagerank";
}

CentralityMetric parse_metric(std::string_view text) {
  if (text == "pagerank") return CentralityMetric::pagerank;
  if (text == "betweenness") return CentralityMetric::betweenness;
  if (text == "closeness") return CentralityMetric::closeness;
  throw InputError(fmt::format("unknown metric '{}'", text));
}

std::string_view to_string(PathLength p) { return p == PathLength::hops ? "hops" : "inverse_weight"; }

PathLength parse_path_length(std::string_view text) {
  if (text == "hops") return PathLength::hops;
  if (text == "inverse_weight") return PathLength::inverse_weight;
  throw InputError(fmt::format("unknown path length '{}' (expected hops|inverse_weight)", text));
}

Adjacency to_adjacency(const WeightedGraph& graph, bool binarize) {
  Adjacency adj;
  adj.directed = graph.directed();
  adj.ids.assign(graph.nodes().begin(), graph.nodes().end());
  adj.out.resize(adj.ids.size());
  const auto index = [&](const std::string& id) {
    return static_cast<std::size_t>(std::lower_bound(adj.ids.begin(), adj.ids.end(), id) - adj.ids.begin());
  };
  for (const auto& [key, w] : graph.edges()) {
    const double weight = binarize ? 1.0 : w;
    const auto u = index(key.first);
    const auto v = index(key.second);
    adj.out[u].push_back({v, weight});
    if (!adj.directed) adj.out[v].push_back({u, weight});
  }
  return adj;
}

std::vector<double> pagerank(const Adjacency& adj, const CentralityOptions& options) {
  const std::size_t n = adj.size();
  if (n == 0) return {};
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& arc : adj.out[u]) out_weight[u] += arc.weight;
  }
  const double d = options.damping;
  const double nn = static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / nn);
  std::vector<double> next(n);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (out_weight[u] == 0.0) dangling += rank[u];
    }
    std::fill(next.begin(), next.end(), (1.0 - d) / nn + d * dangling / nn);
    for (std::size_t u = 0; u < n; ++u) {
      if (out_weight[u] == 0.0) continue;
      const double share = d * rank[u] / out_weight[u];
      for (const auto& arc : adj.out[u]) next[arc.to] += share * arc.weight;
    }
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::fabs(next[v] - rank[v]);
    rank.swap(next);
    if (change < options.tolerance) {
      double total = 0.0;
      for (const double r : rank) total += r;
      for (double& r : rank) r /= total;
      return rank;
    }
  }
  throw NumericError(fmt::format("pagerank did not converge in {} iterations", options.max_iterations));
}

namespace {

// Per-source shortest-path state, reused across sources.
struct Workspace {
  explicit Workspace(std::size_t n) : dist(n), sigma(n), delta(n), preds(n) { order.reserve(n); }
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<std::vector<std::pair<std::size_t, double>>> preds;
  std::vector<std::size_t> order;  // nodes in non-decreasing distance

  void reset() {
    std::fill(dist.begin(), dist.end(), -1.0);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();
  }
};

void shortest_paths_hops(const Adjacency& adj, std::size_t s, Workspace& ws) {
  ws.reset();
  ws.dist[s] = 0.0;
  ws.sigma[s] = 1.0;
  std::queue<std::size_t> queue;
  queue.push(s);
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop();
    ws.order.push_back(v);
    for (const auto& arc : adj.out[v]) {
      const auto w = arc.to;
      if (ws.dist[w] < 0.0) {
        ws.dist[w] = ws.dist[v] + 1.0;
        queue.push(w);
      }
      if (ws.dist[w] == ws.dist[v] + 1.0) {
        ws.sigma[w] += ws.sigma[v] * arc.weight;
        ws.preds[w].emplace_back(v, arc.weight);
      }
    }
  }
}

void shortest_paths_weighted(const Adjacency& adj, std::size_t s, Workspace& ws) {
  ws.reset();
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<bool> settled(adj.size(), false);
  ws.dist[s] = 0.0;
  ws.sigma[s] = 1.0;
  heap.emplace(0.0, s);
  while (!heap.empty()) {
    const auto [dv, v] = heap.top();
    heap.pop();
    if (settled[v] || dv > ws.dist[v]) continue;
    settled[v] = true;
    ws.order.push_back(v);
    for (const auto& arc : adj.out[v]) {
      const auto w = arc.to;
      const double alt = dv + 1.0 / arc.weight;
      // Sums of reciprocals round differently along different routes, so
      // lengths within a relative 1e-12 count as equal.
      const double tol = 1e-12 * alt;
      if (ws.dist[w] < 0.0 || alt < ws.dist[w] - tol) {
        ws.dist[w] = alt;
        ws.sigma[w] = ws.sigma[v];
        ws.preds[w].assign(1, {v, 1.0});
        heap.emplace(alt, w);
      } else if (alt <= ws.dist[w] + tol) {
        ws.sigma[w] += ws.sigma[v];
        ws.preds[w].emplace_back(v, 1.0);
      }
    }
  }
}

void shortest_paths(const Adjacency& adj, std::size_t s, const CentralityOptions& options, Workspace& ws) {
  if (options.path_length == PathLength::hops) shortest_paths_hops(adj, s, ws);
  else shortest_paths_weighted(adj, s, ws);
}

// Adds source s's dependency scores to `acc`.
void accumulate_dependencies(std::size_t s, Workspace& ws, std::vector<double>& acc) {
  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    const auto w = *it;
    for (const auto& [v, mult] : ws.preds[w]) {
      ws.delta[v] += ws.sigma[v] * mult / ws.sigma[w] * (1.0 + ws.delta[w]);
    }
    if (w != s) acc[w] += ws.delta[w];
  }
}

double closeness_of(const Workspace& ws, std::size_t s) {
  double total = 0.0;
  std::size_t reached = 0;
  for (const auto v : ws.order) {
    if (v == s) continue;
    total += ws.dist[v];
    ++reached;
  }
  return reached == 0 ? 0.0 : static_cast<double>(reached) / total;
}

constexpr std::size_t kSourceBlock = 16;

}  // namespace

std::vector<double> betweenness(const Adjacency& adj, const CentralityOptions& options) {
  const std::size_t n = adj.size();
  const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
  std::vector<std::vector<double>> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Workspace ws(n);
    partial[b].assign(n, 0.0);
    const std::size_t end = std::min(n, (b + 1) * kSourceBlock);
    for (std::size_t s = b * kSourceBlock; s < end; ++s) {
      shortest_paths(adj, s, options, ws);
      accumulate_dependencies(s, ws, partial[b]);
    }
  });
  std::vector<double> bc(n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t v = 0; v < n; ++v) bc[v] += p[v];
  }
  if (!adj.directed) {
    for (double& x : bc) x /= 2.0;
  }
  return bc;
}

std::vector<double> closeness(const Adjacency& adj, const CentralityOptions& options) {
  const std::size_t n = adj.size();
  std::vector<double> out(n, 0.0);
  const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
  parallel_for(blocks, [&](std::size_t b) {
    Workspace ws(n);
    const std::size_t end = std::min(n, (b + 1) * kSourceBlock);
    for (std::size_t s = b * kSourceBlock; s < end; ++s) {
      shortest_paths(adj, s, options, ws);
      out[s] = closeness_of(ws, s);
    }
  });
  return out;
}

namespace serial {

std::vector<double> betweenness(const Adjacency& adj, const CentralityOptions& options) {
  const std::size_t n = adj.size();
  std::vector<double> bc(n, 0.0);
  Workspace ws(n);
  for (std::size_t s = 0; s < n; ++s) {
    shortest_paths(adj, s, options, ws);
    accumulate_dependencies(s, ws, bc);
  }
  if (!adj.directed) {
    for (double& x : bc) x /= 2.0;
  }
  return bc;
}

std::vector<double> closeness(const Adjacency& adj, const CentralityOptions& options) {
  const std::size_t n = adj.size();
  std::vector<double> out(n, 0.0);
  Workspace ws(n);
  for (std::size_t s = 0; s < n; ++s) {
    shortest_paths(adj, s, options, ws);
    out[s] = closeness_of(ws, s);
  }
  return out;
}

}  // namespace serial

CentralityScores centrality(const WeightedGraph& graph, CentralityMetric metric, const CentralityOptions& options) {
  if (graph.empty()) throw InputError("centrality: empty graph");
  const Adjacency adj = to_adjacency(graph, options.binarize);
  std::vector<double> values;
  switch (metric) {
    case CentralityMetric::pagerank: values = pagerank(adj, options); break;
    case CentralityMetric::betweenness: values = betweenness(adj, options); break;
    case CentralityMetric::closeness: values = closeness(adj, options); break;
  }
  CentralityScores out{metric, {}};
  for (std::size_t i = 0; i < adj.size(); ++i) out.scores.emplace(adj.ids[i], values[i]);
  return out;
}

std::set<std::string> top_k_union(const std::vector<CentralityScores>& score_sets, std::size_t k) {
  if (k == 0) throw InputError("top_k_union: k must be >= 1");
  std::set<std::string> out;
  for (const auto& set : score_sets) {
    std::vector<std::pair<std::string, double>> ranked(set.scores.begin(), set.scores.end());
    const std::size_t take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(),
                      [](const auto& a, const auto& b) {
                        if (a.second != b.second) return a.second > b.second;
                        return a.first < b.first;
                      });
    for (std::size_t i = 0; i < take; ++i) out.insert(ranked[i].first);
  }
  return out;
}

}  // namespace coinpulse
