#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coinpulse/corpus/registry.hpp"
#include "coinpulse/corpus/tweet.hpp"

namespace coinpulse {

enum class Directedness { directed, undirected };

struct WeightedEdge {
  std::string u;
  std::string v;
  double weight = 0.0;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Node set plus positive edge weights. Undirected edges are stored once as
/// (u, v) with u < v. Nodes and edges iterate in ascending id order.
class WeightedGraph {
 public:
  using EdgeKey = std::pair<std::string, std::string>;

  explicit WeightedGraph(Directedness directedness = Directedness::undirected) : directedness_(directedness) {}

  Directedness directedness() const { return directedness_; }
  bool directed() const { return directedness_ == Directedness::directed; }

  void add_node(const std::string& id) { nodes_.insert(id); }
  /// Adds `weight` to edge (u, v), creating both nodes. Throws InputError for
  /// u == v or weight <= 0.
  void add_edge(const std::string& u, const std::string& v, double weight = 1.0);

  const std::set<std::string>& nodes() const { return nodes_; }
  const std::map<EdgeKey, double>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// 0 when the edge is absent. Order of u, v is irrelevant for undirected graphs.
  double weight(const std::string& u, const std::string& v) const;
  double total_weight() const;

  /// Sum of incident edge weights (in + out for directed graphs); every node
  /// is present, isolated ones with 0.
  std::map<std::string, double> weighted_degrees() const;

  /// Subgraph on `keep` (ids not in the graph are ignored).
  WeightedGraph induced(const std::set<std::string>& keep) const;

 private:
  Directedness directedness_;
  std::set<std::string> nodes_;
  std::map<EdgeKey, double> edges_;
};

/// Co-mention network: every unordered pair of distinct coins mentioned in one
/// tweet gains weight 1. Every mentioned coin becomes a node.
WeightedGraph build_comention_network(std::span<const MentionSet> mentions);

/// Retweet network: edge retweeter -> original author, weight = number of
/// retweets between the pair. Self-retweets are not edges.
WeightedGraph build_retweet_network(std::span<const Tweet> tweets);

/// Keeps nodes whose weighted degree is at least theta times the total degree
/// sum of the original graph (one pass) and returns the induced subgraph.
/// Requires 0 < theta < 1.
WeightedGraph degree_share_filter(const WeightedGraph& graph, double theta);

/// Classic k-core: repeatedly removes nodes with fewer than k neighbours.
WeightedGraph kcore_filter(const WeightedGraph& graph, std::size_t k);

struct EdgeShare {
  std::string u;
  std::string v;
  double weight = 0.0;
  /// weight / total edge weight
  double share = 0.0;
};

/// Edges carrying at least theta of the total edge weight, heaviest first,
/// ties in (u, v) order. Requires 0 < theta < 1.
std::vector<EdgeShare> edge_weight_share_filter(const WeightedGraph& graph, double theta);

/// Edge list CSV: header `u,v,weight`, rows in (u, v) order.
void write_edge_list(std::ostream& out, const WeightedGraph& graph);
/// Reads an edge list written by write_edge_list. Undirected rows are
/// canonicalized to u < v.
WeightedGraph read_edge_list(std::istream& in, Directedness directedness);

/// Candidate list: one node id per line; blank lines and '#' comments skipped.
std::vector<std::string> read_candidate_list(const std::filesystem::path& path);
std::vector<std::string> read_candidate_list(std::istream& in);

}  // namespace coinpulse
