#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "../oracles/oracles.hpp"
#include "coinpulse/error.hpp"
#include "coinpulse/netgraph/centrality.hpp"
#include "coinpulse/netgraph/graph.hpp"
#include "coinpulse/netgraph/influencers.hpp"
#include "coinpulse/netgraph/similarity.hpp"
#include "coinpulse/parallel.hpp"
#include "helpers.hpp"

using namespace coinpulse;

namespace {

WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p, Directedness d, bool weighted) {
  WeightedGraph g(d);
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> w(1, 4);
  for (std::size_t i = 0; i < n; ++i) g.add_node("n" + std::to_string(100 + i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (d == Directedness::undirected && j < i)) continue;
      if (edge(rng)) g.add_edge("n" + std::to_string(100 + i), "n" + std::to_string(100 + j), weighted ? w(rng) : 1.0);
    }
  }
  return g;
}

Tweet retweet(std::string id, std::string author, std::string original) {
  auto t = testing::tweet(std::move(id), "2024-01-01T00:00:00Z", "RT", AuthorClass::influencer, std::move(author));
  t.retweeted_author_id = std::move(original);
  return t;
}

CandidateProfile profile(std::string id, std::int64_t followers, const char* last, std::vector<double> eng) {
  CandidateProfile p;
  p.id = std::move(id);
  p.followers = followers;
  p.last_tweet_at = testing::at(last);
  p.recent_engagements = std::move(eng);
  p.bio = "crypto trader";
  return p;
}

}  // namespace

TEST_SUITE("netgraph") {
  TEST_CASE("co-mention examples") {
    const std::vector<MentionSet> mentions{{"BTC", "ETH"}, {"BTC", "ETH", "SOL"}, {"DOGE"}, {}};
    const auto g = build_comention_network(mentions);
    CHECK(g.weight("BTC", "ETH") == 2.0);
    CHECK(g.weight("ETH", "BTC") == 2.0);
    CHECK(g.weight("ETH", "SOL") == 1.0);
    CHECK(g.weight("BTC", "SOL") == 1.0);
    CHECK(g.node_count() == 4);  // DOGE is an isolated node
    CHECK(g.weighted_degrees().at("DOGE") == 0.0);
  }

  TEST_CASE("co-mention total weight equals sum of C(m, 2)") {
    std::mt19937_64 rng(3);
    const std::vector<std::string> coins{"A", "B", "C", "D", "E", "F"};
    std::vector<MentionSet> mentions;
    std::bernoulli_distribution pick(0.35);
    double expected = 0.0;
    for (int i = 0; i < 500; ++i) {
      MentionSet m;
      for (const auto& c : coins)
        if (pick(rng)) m.push_back(c);
      expected += static_cast<double>(m.size() * (m.size() - (m.empty() ? 0 : 1))) / 2.0;
      mentions.push_back(m);
    }
    const auto g = build_comention_network(mentions);
    CHECK(g.total_weight() == expected);
    double degree_sum = 0.0;
    for (const auto& [id, d] : g.weighted_degrees()) degree_sum += d;
    CHECK(degree_sum == 2.0 * expected);
  }

  TEST_CASE("retweet network examples") {
    const std::vector<Tweet> tweets{retweet("1", "u1", "u2"), retweet("2", "u1", "u2"), retweet("3", "u3", "u2"),
                                    retweet("4", "u2", "u2"), testing::tweet("5", "2024-01-01T00:00:00Z", "gm")};
    const auto g = build_retweet_network(tweets);
    CHECK(g.directed());
    CHECK(g.weight("u1", "u2") == 2.0);
    CHECK(g.weight("u2", "u1") == 0.0);
    CHECK(g.weight("u3", "u2") == 1.0);
    CHECK(g.edge_count() == 2);
    CHECK(g.total_weight() == 3.0);  // self-retweet excluded
  }

  TEST_CASE("graph rejects self loops and non-positive weights") {
    WeightedGraph g;
    CHECK_THROWS_AS(g.add_edge("a", "a"), InputError);
    CHECK_THROWS_AS(g.add_edge("a", "b", 0.0), InputError);
    g.add_edge("b", "a", 2.0);
    CHECK(g.edges().begin()->first == WeightedGraph::EdgeKey{"a", "b"});
  }

  TEST_CASE("pagerank two-node cycle and star") {
    WeightedGraph two(Directedness::directed);
    two.add_edge("a", "b");
    two.add_edge("b", "a");
    const auto pr = pagerank(to_adjacency(two));
    CHECK(pr[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pr[1] == doctest::Approx(0.5).epsilon(1e-12));

    WeightedGraph star(Directedness::directed);
    for (const char* leaf : {"l1", "l2", "l3"}) star.add_edge(leaf, "hub");
    const auto adj = to_adjacency(star);
    const auto s = pagerank(adj);
    CHECK(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s[0] > s[1]);  // "hub" sorts first
  }

  TEST_CASE("pagerank matches a dense linear solve") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 10; ++rep) {
      const auto g = random_graph(rng, 12 + rep, 0.2, rep % 2 ? Directedness::directed : Directedness::undirected, true);
      const auto pr = pagerank(to_adjacency(g));
      const auto ref = oracle::dense_pagerank(g, 0.85L);
      for (std::size_t i = 0; i < pr.size(); ++i) CHECK(std::fabs(pr[i] - static_cast<double>(ref[i])) < 1e-8);
    }
  }

  TEST_CASE("betweenness on a path and a star") {
    WeightedGraph path;
    path.add_edge("a", "b");
    path.add_edge("b", "c");
    const auto bp = betweenness(to_adjacency(path));
    CHECK(bp == std::vector<double>{0.0, 1.0, 0.0});

    WeightedGraph star;
    for (const char* leaf : {"l1", "l2", "l3", "l4"}) star.add_edge("hub", leaf);
    const auto bs = betweenness(to_adjacency(star));
    CHECK(bs[0] == 6.0);
  }

  TEST_CASE("multiplicity changes shortest path counts") {
    // Square a-b-d, a-c-d; doubling a-b makes b carry two thirds of a-d paths.
    WeightedGraph g;
    g.add_edge("a", "b", 2.0);
    g.add_edge("b", "d");
    g.add_edge("a", "c");
    g.add_edge("c", "d");
    const auto b = betweenness(to_adjacency(g));
    CHECK(b[1] == doctest::Approx(2.0 / 3.0));
    CHECK(b[0] == doctest::Approx(2.0 / 3.0));  // b-c pair goes through a twice as often as through d
    const auto unit = betweenness(to_adjacency(g, true));
    CHECK(unit[1] == doctest::Approx(0.5));
  }

  TEST_CASE("betweenness and closeness match brute force on small graphs") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
      const auto g = random_graph(rng, 5 + rep % 4, 0.45, rep % 3 == 0 ? Directedness::directed : Directedness::undirected,
                                  rep % 2 == 0);
      const auto adj = to_adjacency(g);
      const auto b = betweenness(adj);
      const auto ref = oracle::enumerated_betweenness(g);
      for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::fabs(b[i] - static_cast<double>(ref[i])) < 1e-9);
      const auto c = closeness(adj);
      const auto cref = oracle::floyd_closeness(g);
      for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::fabs(c[i] - static_cast<double>(cref[i])) < 1e-12);
    }
  }

  TEST_CASE("centrality is invariant to uniform weight scaling") {
    std::mt19937_64 rng(6);
    const auto g = random_graph(rng, 15, 0.3, Directedness::directed, true);
    WeightedGraph scaled(Directedness::directed);
    for (const auto& id : g.nodes()) scaled.add_node(id);
    for (const auto& [key, w] : g.edges()) scaled.add_edge(key.first, key.second, 3.0 * w);
    const auto a = pagerank(to_adjacency(g));
    const auto b = pagerank(to_adjacency(scaled));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-12);
    CentralityOptions inv;
    inv.path_length = PathLength::inverse_weight;
    const auto ca = betweenness(to_adjacency(g), inv);
    const auto cb = betweenness(to_adjacency(scaled), inv);
    for (std::size_t i = 0; i < ca.size(); ++i) CHECK(std::fabs(ca[i] - cb[i]) < 1e-9);
  }

  TEST_CASE("parallel centrality equals serial") {
    std::mt19937_64 rng(7);
    const auto g = random_graph(rng, 60, 0.08, Directedness::directed, true);
    const auto adj = to_adjacency(g);
    set_worker_count(1);
    const auto one = betweenness(adj);
    const auto ser = serial::betweenness(adj);
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(std::fabs(one[i] - ser[i]) <= 1e-9 * (1.0 + ser[i]));
    for (const int w : {2, 5}) {
      set_worker_count(w);
      CHECK(betweenness(adj) == one);  // fixed block reduction order
      CHECK(closeness(adj) == serial::closeness(adj));
    }
    set_worker_count(0);
  }

  TEST_CASE("centrality front door") {
    WeightedGraph empty;
    CHECK_THROWS_AS(centrality(empty, CentralityMetric::pagerank), InputError);
    CHECK(parse_metric("betweenness") == CentralityMetric::betweenness);
    CHECK_THROWS_AS(parse_metric("eigen"), InputError);
    CHECK(parse_path_length("inverse_weight") == PathLength::inverse_weight);
  }

  TEST_CASE("top-k union examples") {
    CentralityScores a{CentralityMetric::pagerank, {{"x", 0.5}, {"y", 0.3}, {"z", 0.2}}};
    CentralityScores b{CentralityMetric::betweenness, {{"x", 1.0}, {"y", 0.0}, {"z", 4.0}}};
    CHECK(top_k_union({a, b}, 1) == std::set<std::string>{"x", "z"});
    CHECK(top_k_union({a, b}, 2) == std::set<std::string>{"x", "y", "z"});
    CentralityScores ties{CentralityMetric::closeness, {{"q", 1.0}, {"p", 1.0}, {"r", 1.0}}};
    CHECK(top_k_union({ties}, 2) == std::set<std::string>{"p", "q"});
    CHECK(top_k_union({a}, 50).size() == 3);
    CHECK_THROWS_AS(top_k_union({a}, 0), InputError);
  }

  TEST_CASE("influencer filter examples") {
    const auto as_of = testing::at("2024-06-01T00:00:00Z");
    std::vector<CandidateProfile> cands{
        profile("ok", 5000, "2024-05-30T00:00:00Z", std::vector<double>(10, 200.0)),
        profile("few_followers", 4999, "2024-05-30T00:00:00Z", std::vector<double>(10, 1000.0)),
        profile("stale", 90000, "2024-02-02T00:00:00Z", std::vector<double>(10, 1000.0)),
        profile("quiet", 90000, "2024-05-30T00:00:00Z", std::vector<double>(10, 199.0)),
        profile("bot", 90000, "2024-05-30T00:00:00Z", std::vector<double>(10, 900.0)),
    };
    cands[4].bio = "automated bot";
    CandidateProfile missing;
    missing.id = "missing";
    cands.push_back(missing);
    const auto decisions = filter_influencers(cands, InfluencerCriteria{}, as_of, [](std::string_view bio) {
      return bio.find("bot") == std::string_view::npos;
    });
    REQUIRE(decisions.size() == 6);
    CHECK(decisions[0].accepted);
    CHECK(decisions[1].reason == InfluencerRejection::followers);
    CHECK(decisions[2].reason == InfluencerRejection::inactivity);
    CHECK(decisions[3].reason == InfluencerRejection::engagement);
    CHECK(decisions[4].reason == InfluencerRejection::description);
    CHECK(decisions[5].reason == InfluencerRejection::missing_data);
    CHECK(to_string(InfluencerRejection::inactivity) == "inactivity");
  }

  TEST_CASE("engagement uses only the latest sample") {
    const auto as_of = testing::at("2024-06-01T00:00:00Z");
    std::vector<double> eng(10, 300.0);
    eng.insert(eng.end(), 20, 0.0);  // older posts are ignored
    const std::vector<CandidateProfile> c{profile("a", 6000, "2024-06-01T00:00:00Z", eng)};
    const auto d = filter_influencers(c, InfluencerCriteria{}, as_of, [](std::string_view) { return true; });
    CHECK(d[0].accepted);
  }

  TEST_CASE("profiles parse") {
    std::istringstream in(
        R"({"id":"a","followers":10,"last_tweet_at":"2024-01-01T00:00:00Z","recent_engagements":[1,2],"bio":"x"})"
        "\n\n"
        R"({"id":"b"})"
        "\n");
    const auto p = parse_profiles(in);
    REQUIRE(p.size() == 2);
    CHECK(p[0].followers == 10);
    CHECK(p[0].recent_engagements->size() == 2);
    CHECK_FALSE(p[1].followers.has_value());
    std::istringstream bad("{oops\n");
    CHECK_THROWS_AS(parse_profiles(bad), InputError);
  }

  TEST_CASE("degree-share filter on a star") {
    WeightedGraph g;
    for (int i = 0; i < 10; ++i) g.add_edge("hub", "leaf" + std::to_string(i));
    // total degree 20: hub 10 (share .5), leaves 1 (share .05)
    CHECK(degree_share_filter(g, 0.05).node_count() == 11);
    const auto kept = degree_share_filter(g, 0.06);
    CHECK(kept.node_count() == 1);
    CHECK(kept.edge_count() == 0);
    CHECK_THROWS_AS(degree_share_filter(g, 0.0), InputError);
    CHECK_THROWS_AS(degree_share_filter(g, 1.0), InputError);
  }

  TEST_CASE("degree-share filter is monotone in theta") {
    std::mt19937_64 rng(8);
    const auto g = random_graph(rng, 40, 0.15, Directedness::undirected, true);
    std::size_t prev = g.node_count() + 1;
    std::set<std::string> prev_nodes = g.nodes();
    for (const double theta : {0.001, 0.005, 0.01, 0.02, 0.04, 0.08}) {
      const auto f = degree_share_filter(g, theta);
      CHECK(f.node_count() <= prev);
      CHECK(std::includes(prev_nodes.begin(), prev_nodes.end(), f.nodes().begin(), f.nodes().end()));
      for (const auto& [key, w] : f.edges()) CHECK(g.weight(key.first, key.second) == w);
      prev = f.node_count();
      prev_nodes = f.nodes();
    }
  }

  TEST_CASE("k-core filter") {
    WeightedGraph g;
    g.add_edge("a", "b");
    g.add_edge("b", "c");
    g.add_edge("c", "a");
    g.add_edge("c", "d");
    const auto core = kcore_filter(g, 2);
    CHECK(core.nodes() == std::set<std::string>{"a", "b", "c"});
    CHECK(kcore_filter(g, 3).empty());
  }

  TEST_CASE("edge weight share filter") {
    WeightedGraph g;
    g.add_edge("a", "b", 10);
    g.add_edge("b", "c", 5);
    g.add_edge("c", "d", 1);
    const auto top = edge_weight_share_filter(g, 0.25);
    REQUIRE(top.size() == 2);
    CHECK(top[0].u == "a");
    CHECK(top[0].share == doctest::Approx(10.0 / 16.0));
    CHECK(top[1].v == "c");
    CHECK(edge_weight_share_filter(g, 0.05).size() == 3);
  }

  TEST_CASE("edge list round trip and candidate lists") {
    std::mt19937_64 rng(9);
    for (const auto d : {Directedness::directed, Directedness::undirected}) {
      const auto g = random_graph(rng, 12, 0.3, d, true);
      std::stringstream ss;
      write_edge_list(ss, g);
      const auto back = read_edge_list(ss, d);
      CHECK(back.edges() == g.edges());
    }
    std::istringstream rev("u,v,weight\nz,a,2\n");
    CHECK(read_edge_list(rev, Directedness::undirected).weight("a", "z") == 2.0);

    std::istringstream list("# watch\nalice\n\n  bob  \n");
    CHECK(read_candidate_list(list) == std::vector<std::string>{"alice", "bob"});
  }

  TEST_CASE("tag similarity examples") {
    const CoinRegistry reg(std::vector<CoinEntry>{{"A", {"aa"}, {"a", "b"}}, {"B", {"bb"}, {"a", "c"}}, {"C", {"cc"}, {}}});
    const auto m = tag_similarity_matrix(reg, {"A", "B", "C"});
    CHECK(m.values(0, 1) == doctest::Approx(0.5));
    CHECK(m.values(1, 0) == doctest::Approx(0.5));
    CHECK(m.values(0, 0) == doctest::Approx(1.0));
    CHECK(m.values(2, 2) == 0.0);
    CHECK(m.values(0, 2) == 0.0);
    CHECK_THROWS_AS(tag_similarity_matrix(reg, {"A", "Z"}), InputError);
  }

  TEST_CASE("adjacency matrix follows the requested order") {
    WeightedGraph g;
    g.add_edge("x", "y", 3);
    const auto m = adjacency_matrix(g, {"y", "z", "x"});
    CHECK(m.values(0, 2) == 3.0);
    CHECK(m.values(2, 0) == 3.0);
    CHECK(m.values(1, 1) == 0.0);
  }

  TEST_CASE("matrix pearson") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> n01;
    const std::vector<std::string> labels{"a", "b", "c", "d", "e", "f"};
    LabeledMatrix a{labels, Eigen::MatrixXd::Zero(6, 6)};
    LabeledMatrix b{labels, Eigen::MatrixXd::Zero(6, 6)};
    std::vector<double> ua, ub;
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        a.values(i, j) = a.values(j, i) = n01(rng);
        b.values(i, j) = b.values(j, i) = n01(rng);
        ua.push_back(a.values(i, j));
        ub.push_back(b.values(i, j));
      }
    }
    const auto r = matrix_pearson(a, b);
    CHECK(r.n_pairs == 15);
    CHECK(std::fabs(r.r - static_cast<double>(oracle::pearson(ua, ub))) < 1e-12);

    LabeledMatrix affine = a;
    affine.values = 2.0 * a.values.array() + 5.0;
    CHECK(matrix_pearson(a, affine).r == doctest::Approx(1.0));
    LabeledMatrix neg = a;
    neg.values = -a.values;
    CHECK(matrix_pearson(a, neg).r == doctest::Approx(-1.0));

    LabeledMatrix relabeled = b;
    relabeled.labels[0] = "zz";
    CHECK_THROWS_AS(matrix_pearson(a, relabeled), InputError);
    LabeledMatrix flat{labels, Eigen::MatrixXd::Ones(6, 6)};
    CHECK_THROWS_AS(matrix_pearson(a, flat), NumericError);
  }
}
