#include "coinpulse/netgraph/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "coinpulse/error.hpp"

namespace coinpulse {

void WeightedGraph::add_edge(const std::string& u, const std::string& v, double weight) {
  if (u == v) throw InputError(fmt::format("self-loop on '{}'", u));
  if (!(weight > 0.0)) throw InputError(fmt::format("edge ({}, {}) has non-positive weight {}", u, v, weight));
  nodes_.insert(u);
  nodes_.insert(v);
  EdgeKey key = (!directed() && v < u) ? EdgeKey{v, u} : EdgeKey{u, v};
  edges_[std::move(key)] += weight;
}

double WeightedGraph::weight(const std::string& u, const std::string& v) const {
  const EdgeKey key = (!directed() && v < u) ? EdgeKey{v, u} : EdgeKey{u, v};
  const auto it = edges_.find(key);
  return it == edges_.end() ? 0.0 : it->second;
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const auto& [key, w] : edges_) total += w;
  return total;
}

std::map<std::string, double> WeightedGraph::weighted_degrees() const {
  std::map<std::string, double> deg;
  for (const auto& n : nodes_) deg[n] = 0.0;
  for (const auto& [key, w] : edges_) {
    deg[key.first] += w;
    deg[key.second] += w;
  }
  return deg;
}

WeightedGraph WeightedGraph::induced(const std::set<std::string>& keep) const {
  WeightedGraph out(directedness_);
  for (const auto& n : nodes_) {
    if (keep.count(n)) out.nodes_.insert(n);
  }
  for (const auto& [key, w] : edges_) {
    if (out.nodes_.count(key.first) && out.nodes_.count(key.second)) out.edges_.emplace(key, w);
  }
  return out;
}

WeightedGraph build_comention_network(std::span<const MentionSet> mentions) {
  WeightedGraph g(Directedness::undirected);
  for (const auto& set : mentions) {
    for (const auto& coin : set) g.add_node(coin);
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        if (set[i] != set[j]) g.add_edge(set[i], set[j], 1.0);
      }
    }
  }
  return g;
}

WeightedGraph build_retweet_network(std::span<const Tweet> tweets) {
  WeightedGraph g(Directedness::directed);
  for (const auto& t : tweets) {
    if (!t.retweeted_author_id || *t.retweeted_author_id == t.author_id) continue;
    g.add_edge(t.author_id, *t.retweeted_author_id, 1.0);
  }
  return g;
}

namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw InputError(fmt::format("theta must lie in (0, 1), got {}", theta));
}

}  // namespace

WeightedGraph degree_share_filter(const WeightedGraph& graph, double theta) {
  check_theta(theta);
  const auto degrees = graph.weighted_degrees();
  double total = 0.0;
  for (const auto& [n, d] : degrees) total += d;
  const double threshold = theta * total;
  std::set<std::string> keep;
  for (const auto& [n, d] : degrees) {
    if (d >= threshold) keep.insert(n);
  }
  return graph.induced(keep);
}

WeightedGraph kcore_filter(const WeightedGraph& graph, std::size_t k) {
  std::map<std::string, std::set<std::string>> neighbours;
  for (const auto& n : graph.nodes()) neighbours[n];
  for (const auto& [key, w] : graph.edges()) {
    neighbours[key.first].insert(key.second);
    neighbours[key.second].insert(key.first);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = neighbours.begin(); it != neighbours.end();) {
      if (it->second.size() < k) {
        for (const auto& other : it->second) neighbours[other].erase(it->first);
        it = neighbours.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  std::set<std::string> keep;
  for (const auto& [n, adj] : neighbours) keep.insert(n);
  return graph.induced(keep);
}

std::vector<EdgeShare> edge_weight_share_filter(const WeightedGraph& graph, double theta) {
  check_theta(theta);
  const double total = graph.total_weight();
  std::vector<EdgeShare> out;
  for (const auto& [key, w] : graph.edges()) {
    if (w >= theta * total) out.push_back({key.first, key.second, w, w / total});
  }
  std::stable_sort(out.begin(), out.end(), [](const EdgeShare& a, const EdgeShare& b) { return a.weight > b.weight; });
  return out;
}

void write_edge_list(std::ostream& out, const WeightedGraph& graph) {
  out << "u,v,weight\n";
  for (const auto& [key, w] : graph.edges()) out << fmt::format("{},{},{}\n", key.first, key.second, w);
}

WeightedGraph read_edge_list(std::istream& in, Directedness directedness) {
  WeightedGraph g(directedness);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw InputError("edge list: empty input");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v,weight") throw InputError(fmt::format("edge list: expected header 'u,v,weight', got '{}'", line));
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw InputError(fmt::format("edge list: line {}: expected 3 columns", line_no));
    }
    double w = 0.0;
    const char* b = line.data() + c2 + 1;
    const char* e = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(b, e, w);
    if (ec != std::errc{} || ptr != e) throw InputError(fmt::format("edge list: line {}: invalid weight", line_no));
    g.add_edge(line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1), w);
  }
  return g;
}

std::vector<std::string> read_candidate_list(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    out.push_back(line.substr(start));
  }
  return out;
}

std::vector<std::string> read_candidate_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read candidate list '{}'", path.string()));
  return read_candidate_list(in);
}

}  // namespace coinpulse
