#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coinpulse/netgraph/graph.hpp"

namespace coinpulse {

enum class CentralityMetric { pagerank, betweenness, closeness };
std::string_view to_string(CentralityMetric m);
/// Throws InputError("unknown metric ...").
CentralityMetric parse_metric(std::string_view text);

/// How shortest paths are measured for betweenness and closeness.
/// `hops`: every edge is one step and an edge of weight w counts as w parallel
/// edges when counting shortest paths. `inverse_weight`: edge length 1/w.
enum class PathLength { hops, inverse_weight };
std::string_view to_string(PathLength p);
PathLength parse_path_length(std::string_view text);

struct CentralityOptions {
  double damping = 0.85;
  /// PageRank stops when the L1 change of one iteration drops below this.
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  /// Treat every edge as weight 1.
  bool binarize = false;
  PathLength path_length = PathLength::hops;
};

struct CentralityScores {
  CentralityMetric metric = CentralityMetric::pagerank;
  std::map<std::string, double> scores;
};

/// Index-based adjacency built from a WeightedGraph; node i is the i-th id in
/// ascending order. Undirected edges appear in both directions.
struct Adjacency {
  struct Arc {
    std::size_t to;
    double weight;
  };
  std::vector<std::string> ids;
  std::vector<std::vector<Arc>> out;
  bool directed = false;

  std::size_t size() const { return ids.size(); }
};

Adjacency to_adjacency(const WeightedGraph& graph, bool binarize = false);

/// Damped power iteration on the out-weight-normalized transition matrix;
/// dangling mass is spread uniformly. Scores sum to 1.
std::vector<double> pagerank(const Adjacency& adj, const CentralityOptions& options = {});

/// Brandes accumulation over all sources. Raw pair counts: ordered pairs for
/// directed graphs, unordered pairs for undirected ones. Parallel over blocks
/// of sources with a fixed-order reduction, so the result does not depend on
/// the thread count.
std::vector<double> betweenness(const Adjacency& adj, const CentralityOptions& options = {});

/// (reachable nodes) / (sum of distances to them); 0 for a node that reaches
/// nothing. Directed graphs use outgoing distances.
std::vector<double> closeness(const Adjacency& adj, const CentralityOptions& options = {});

namespace serial {
std::vector<double> betweenness(const Adjacency& adj, const CentralityOptions& options = {});
std::vector<double> closeness(const Adjacency& adj, const CentralityOptions& options = {});
}  // namespace serial

/// Throws InputError for an empty graph.
CentralityScores centrality(const WeightedGraph& graph, CentralityMetric metric, const CentralityOptions& options = {});

/// Union of the top-k ids of every score set. Within a set, ids are ranked by
/// descending score, ties by ascending id, and exactly min(k, size) are taken.
/// Throws InputError for k = 0.
std::set<std::string> top_k_union(const std::vector<CentralityScores>& score_sets, std::size_t k);

}  // namespace coinpulse
