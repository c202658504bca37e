#include "coinpulse/cli/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <map>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coinpulse/cli/output.hpp"
#include "coinpulse/cli/report.hpp"
#include "coinpulse/corpus/corpus.hpp"
#include "coinpulse/corpus/prices.hpp"
#include "coinpulse/corpus/registry.hpp"
#include "coinpulse/corpus/tweet.hpp"
#include "coinpulse/econometrics/adf.hpp"
#include "coinpulse/econometrics/correlation.hpp"
#include "coinpulse/econometrics/granger.hpp"
#include "coinpulse/econometrics/xcorr.hpp"
#include "coinpulse/netgraph/centrality.hpp"
#include "coinpulse/netgraph/graph.hpp"
#include "coinpulse/netgraph/influencers.hpp"
#include "coinpulse/netgraph/similarity.hpp"
#include "coinpulse/parallel.hpp"
#include "coinpulse/signals/classifier.hpp"
#include "coinpulse/signals/external.hpp"
#include "coinpulse/signals/social_signal.hpp"

#ifndef COINPULSE_VERSION
#define COINPULSE_VERSION "0.0.0"
#endif

namespace coinpulse {

namespace {

constexpr std::array kStages{Stage::ingest, Stage::classify, Stage::aggregate, Stage::network,
                             Stage::granger, Stage::xcorr,    Stage::matrix,    Stage::report};

constexpr std::string_view kLagConvention =
    "signal leads price: gamma(k) pairs price at t with the social signal at t-k";

std::set<Stage> plan(Command c) {
  switch (c) {
    case Command::ingest: return {Stage::ingest};
    case Command::classify: return {Stage::ingest, Stage::classify};
    case Command::signals: return {Stage::ingest, Stage::classify, Stage::aggregate};
    case Command::network: return {Stage::ingest, Stage::network};
    case Command::granger: return {Stage::ingest, Stage::classify, Stage::aggregate, Stage::granger};
    case Command::xcorr: return {Stage::ingest, Stage::classify, Stage::aggregate, Stage::xcorr};
    case Command::matrix: return {Stage::ingest, Stage::network, Stage::matrix};
    case Command::report: return {Stage::ingest, Stage::classify, Stage::aggregate, Stage::granger, Stage::report};
    case Command::all: return {kStages.begin(), kStages.end()};
  }
  return {};
}

std::vector<std::string> stage_outputs(Stage s) {
  switch (s) {
    case Stage::ingest: return {"rejections.csv", "mentions.csv"};
    case Stage::classify: return {"labels.csv"};
    case Stage::aggregate: return {"signal_counts.csv", "social_signal.csv"};
    case Stage::network:
      return {"comention_edges.csv", "comention_nodes.csv",      "comention_filtered_edges.csv",
              "comention_top_pairs.csv", "tag_similarity.csv",   "retweet_edges.csv",
              "centrality.csv",      "influencer_candidates.txt", "influencers.csv",
              "network_report.json"};
    case Stage::granger: return {"granger.csv", "granger_ss.csv"};
    case Stage::xcorr: return {"xcorr.csv", "xcorr_best.csv"};
    case Stage::matrix: return {"matrix.csv", "matrix_pvalues.csv", "matrix_adf.csv", "matrix_report.json"};
    case Stage::report:
      return {"corpus_summary.json", "author_shares.csv", "signal_shares.csv",         "coin_summary.csv",
              "mention_stats.csv",   "mention_histogram.csv", "significance_table.csv", "significance_table.json",
              "report.json"};
  }
  return {};
}

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

CsvTable matrix_table(const std::vector<std::string>& labels, const Eigen::MatrixXd& m, int decimals) {
  CsvTable t;
  t.header.push_back("coin");
  t.header.insert(t.header.end(), labels.begin(), labels.end());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row{labels[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_fixed(m(i, j), decimals));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable edge_table(const WeightedGraph& g) {
  CsvTable t{{"u", "v", "weight"}, {}};
  for (const auto& [key, w] : g.edges()) t.rows.push_back({key.first, key.second, format_double(w)});
  return t;
}

/// Prices of one coin over an hourly grid; throws when the series does not
/// cover the grid contiguously.
std::vector<double> prices_on_grid(const PriceSeries& s, const HourlyGrid& grid) {
  const auto gaps = missing_hours(s);
  if (!gaps.empty()) {
    throw InputError(fmt::format("prices for {} miss hours {} .. {}", s.coin_id, format_rfc3339(gaps.front().first),
                                 format_rfc3339(gaps.front().last)));
  }
  if (s.points.empty() || s.points.front().at > grid.origin || s.points.back().at < grid.at(grid.hours - 1)) {
    throw InputError(fmt::format("prices for {} do not cover the analysis window", s.coin_id));
  }
  const auto offset = static_cast<std::size_t>((grid.origin - s.points.front().at) / Hours{1});
  std::vector<double> out(grid.hours);
  for (std::size_t i = 0; i < grid.hours; ++i) out[i] = s.points[offset + i].price;
  return out;
}

/// Largest hourly window covered by every listed series.
HourlyGrid common_grid(const std::map<std::string, PriceSeries>& prices, const std::vector<std::string>& coins) {
  Timestamp first = Timestamp::min();
  Timestamp last = Timestamp::max();
  for (const auto& c : coins) {
    const auto& pts = prices.at(c).points;
    if (pts.empty()) throw InputError(fmt::format("no prices for {}", c));
    first = std::max(first, pts.front().at);
    last = std::min(last, pts.back().at);
  }
  if (coins.empty() || last < first) throw InputError("price series share no common hours");
  return HourlyGrid{first, static_cast<std::size_t>((last - first) / Hours{1}) + 1};
}

struct DailyView {
  std::size_t first_hour = 0;
  std::size_t days = 0;
};

/// Whole UTC days inside the grid.
DailyView daily_view(const HourlyGrid& grid) {
  std::size_t first = 0;
  while (first < grid.hours && grid.at(first) != bucket_floor(grid.at(first), Resolution::daily)) ++first;
  return {first, first < grid.hours ? (grid.hours - first) / 24 : 0};
}

std::vector<double> daily_means(const std::vector<double>& hourly, const DailyView& view) {
  std::vector<double> window(hourly.begin() + static_cast<std::ptrdiff_t>(view.first_hour),
                             hourly.begin() + static_cast<std::ptrdiff_t>(view.first_hour + 24 * view.days));
  return block_means(window, 24);
}

struct CoinSeries {
  std::vector<double> price;
  std::vector<double> ss;
  std::vector<double> ss_crypto;
};

class Pipeline {
 public:
  Pipeline(const PipelineConfig& config, Command command)
      : config_(config), command_(command), out_(config.resolve(config.out_dir)) {}

  nlohmann::json run();

 private:
  void record_inputs();
  void ingest();
  void classify();
  void aggregate();
  void network();
  void granger();
  void xcorr();
  void matrix();
  void report();

  void run_stage(Stage s);
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  nlohmann::json manifest(const std::string& status, const std::string& error) const;

  const PipelineConfig& config_;
  Command command_;
  OutputWriter out_;
  std::set<Stage> plan_;

  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json stage_rows_ = nlohmann::json::object();
  nlohmann::json timings_ = nlohmann::json::object();
  std::vector<std::string> completed_;
  std::vector<std::string> warnings_;

  // ingest
  std::optional<CoinRegistry> registry_;
  std::map<std::string, PriceSeries> prices_;
  std::vector<Rejection> rejections_;
  Corpus corpus_;
  // classify
  std::vector<ClassifierVerdict> verdicts_;
  // aggregate
  std::vector<std::string> signal_coins_;
  HourlyGrid grid_;
  std::map<std::string, CoinSeries> series_;
  // network
  WeightedGraph comention_;
  WeightedGraph filtered_;
  nlohmann::json network_report_;
  // econometrics
  std::vector<CoinGrangerRows> granger_rows_;
  nlohmann::json xcorr_best_ = nlohmann::json::array();
  nlohmann::json matrix_report_;
};

void Pipeline::record_inputs() {
  auto add = [this](const std::string& name, const std::string& path) {
    if (path.empty()) return;
    const auto resolved = config_.resolve(path);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(resolved, ec)) {
      throw InputError(fmt::format("input {} '{}' does not exist", name, resolved.string()));
    }
    inputs_[name] = {{"path", path}, {"sha256", sha256_file(resolved)}};
  };
  add("tweets", config_.tweets);
  add("prices", config_.prices);
  add("registry", config_.registry);
  add("lexicon", config_.lexicon);
  add("profiles", config_.profiles);
  for (std::size_t i = 0; i < config_.candidate_lists.size(); ++i) {
    add(fmt::format("candidate_list_{}", i), config_.candidate_lists[i]);
  }
}

void Pipeline::ingest() {
  record_inputs();
  registry_ = CoinRegistry::load(config_.resolve(config_.registry));
  prices_ = load_prices(config_.resolve(config_.prices));
  auto load = load_tweets(config_.resolve(config_.tweets));
  rejections_ = std::move(load.rejections);
  corpus_ = index_corpus(std::move(load.tweets), *registry_);
  for (const auto& [coin, series] : prices_) {
    if (!registry_->find(coin)) warn(fmt::format("ingest: prices for {} which is not in the registry", coin));
  }

  CsvTable rej{{"line", "reason", "detail"}, {}};
  for (const auto& r : rejections_) rej.rows.push_back({std::to_string(r.line), r.reason, r.detail});
  out_.write_csv("rejections.csv", rej);

  CsvTable mentions{{"tweet_id", "coins"}, {}};
  std::size_t mention_total = 0;
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    mentions.rows.push_back({corpus_.tweets[i].id, fmt::format("{}", fmt::join(corpus_.mentions[i], ";"))});
    mention_total += corpus_.mentions[i].size();
  }
  out_.write_csv("mentions.csv", mentions);

  std::size_t points = 0;
  for (const auto& [coin, series] : prices_) points += series.points.size();
  stage_rows_["ingest"] = {{"tweets", corpus_.size()},
                           {"rejected", rejections_.size()},
                           {"mentions", mention_total},
                           {"registry_coins", registry_->coins().size()},
                           {"price_series", prices_.size()},
                           {"price_points", points}};
}

void Pipeline::classify() {
  std::vector<std::string> texts;
  texts.reserve(corpus_.size());
  for (const auto& t : corpus_.tweets) texts.push_back(t.text);
  if (config_.classifier == ClassifierKind::lexicon) {
    const LexiconClassifier classifier(Lexicon::load(config_.resolve(config_.lexicon)), &*registry_);
    verdicts_ = classifier.classify(texts);
  } else {
    verdicts_ = ExternalClassifier(config_.external).classify(texts);
  }

  CsvTable labels{{"tweet_id", "relevant", "raw_label", "label", "source"}, {}};
  std::size_t relevant = 0;
  std::size_t buy = 0;
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    const auto& v = verdicts_[i];
    relevant += v.relevant;
    buy += v.label == SignalLabel::buy;
    labels.rows.push_back({corpus_.tweets[i].id, v.relevant ? "true" : "false",
                           v.raw_label ? std::string(to_string(*v.raw_label)) : "",
                           v.label ? std::string(to_string(*v.label)) : "", std::string(to_string(v.source))});
  }
  out_.write_csv("labels.csv", labels);
  stage_rows_["classify"] = {
      {"tweets", corpus_.size()}, {"relevant", relevant}, {"buy", buy}, {"not_buy", relevant - buy}};
}

void Pipeline::aggregate() {
  signal_coins_ = config_.signal_coins;
  if (signal_coins_.empty()) {
    for (const auto& c : registry_->coins()) {
      if (prices_.count(c.id)) signal_coins_.push_back(c.id);
    }
  }
  std::sort(signal_coins_.begin(), signal_coins_.end());
  signal_coins_.erase(std::unique(signal_coins_.begin(), signal_coins_.end()), signal_coins_.end());
  if (signal_coins_.empty()) throw InputError("no coin has both a registry entry and prices");
  for (const auto& c : signal_coins_) {
    if (!registry_->find(c)) throw InputError(fmt::format("signal coin {} is not in the registry", c));
    if (!prices_.count(c)) throw InputError(fmt::format("signal coin {} has no prices", c));
  }

  grid_ = common_grid(prices_, signal_coins_);
  const auto table = aggregate_signal_counts(corpus_, verdicts_, signal_coins_, grid_, config_.population);

  CsvTable counts{{"coin", "window_end", "n_buy", "n_not_buy"}, {}};
  for (const auto& id : table.ids()) {
    const auto& s = table.series(id);
    for (std::size_t h = 0; h < grid_.hours; ++h) {
      counts.rows.push_back({id, format_rfc3339(grid_.at(h)), std::to_string(s[h].buy), std::to_string(s[h].not_buy)});
    }
  }
  out_.write_csv("signal_counts.csv", counts);

  CsvTable signal{{"coin", "timestamp", "ss", "ss_crypto"}, {}};
  for (const auto& coin : signal_coins_) {
    CoinSeries cs;
    cs.price = prices_on_grid(prices_.at(coin), grid_);
    cs.ss = social_signal_series(table, coin, SignalVariant::plain).values;
    cs.ss_crypto = social_signal_series(table, coin, SignalVariant::with_market).values;
    for (std::size_t h = 0; h < grid_.hours; ++h) {
      signal.rows.push_back({coin, format_rfc3339(grid_.at(h)), format_double(cs.ss[h]), format_double(cs.ss_crypto[h])});
    }
    series_[coin] = std::move(cs);
  }
  out_.write_csv("social_signal.csv", signal);
  stage_rows_["aggregate"] = {{"coins", signal_coins_.size()},
                              {"hours", grid_.hours},
                              {"window_start", format_rfc3339(grid_.origin)},
                              {"population", std::string(to_string(config_.population))}};
}

void Pipeline::network() {
  comention_ = build_comention_network(corpus_.mentions);
  if (config_.filter_rule == NetworkFilterRule::degree_share) {
    filtered_ = degree_share_filter(comention_, config_.degree_share);
  } else {
    filtered_ = kcore_filter(comention_, config_.kcore_k);
  }
  out_.write_csv("comention_edges.csv", edge_table(comention_));
  out_.write_csv("comention_filtered_edges.csv", edge_table(filtered_));

  const auto degrees = comention_.weighted_degrees();
  double degree_total = 0.0;
  for (const auto& [node, d] : degrees) degree_total += d;
  CsvTable nodes{{"coin", "weighted_degree", "share", "kept"}, {}};
  for (const auto& [node, d] : degrees) {
    nodes.rows.push_back({node, format_double(d), degree_total > 0 ? format_double(d / degree_total) : "",
                          filtered_.nodes().count(node) ? "true" : "false"});
  }
  out_.write_csv("comention_nodes.csv", nodes);

  CsvTable pairs{{"u", "v", "weight", "share"}, {}};
  for (const auto& e : edge_weight_share_filter(comention_, config_.edge_share)) {
    pairs.rows.push_back({e.u, e.v, format_double(e.weight), format_double(e.share)});
  }
  out_.write_csv("comention_top_pairs.csv", pairs);

  std::vector<std::string> kept(filtered_.nodes().begin(), filtered_.nodes().end());
  const auto similarity = tag_similarity_matrix(*registry_, kept);
  out_.write_csv("tag_similarity.csv", matrix_table(similarity.labels, similarity.values, 6));

  nlohmann::json report;
  report["comention"] = {{"nodes", comention_.node_count()},
                         {"edges", comention_.edge_count()},
                         {"total_weight", comention_.total_weight()}};
  report["filtered"] = {{"rule", std::string(to_string(config_.filter_rule))},
                        {"nodes", filtered_.node_count()},
                        {"edges", filtered_.edge_count()},
                        {"coins", kept}};
  report["top_pairs"] = pairs.rows.size();
  try {
    const auto mc = matrix_pearson(adjacency_matrix(filtered_, kept), similarity);
    report["tag_similarity_vs_adjacency"] = {{"r", mc.r}, {"p_value", mc.p_value}, {"pairs", mc.n_pairs}};
  } catch (const Error& e) {
    report["tag_similarity_vs_adjacency"] = nullptr;
    warn(fmt::format("network: tag similarity correlation skipped: {}", e.what()));
  }

  const auto retweets = build_retweet_network(corpus_.tweets);
  out_.write_csv("retweet_edges.csv", edge_table(retweets));
  std::set<std::string> candidates;
  CsvTable central{{"account", "pagerank", "betweenness", "closeness"}, {}};
  if (retweets.empty()) {
    warn("network: no retweets in the corpus; centrality ranking skipped");
  } else {
    std::vector<CentralityScores> sets;
    for (const auto metric : {CentralityMetric::pagerank, CentralityMetric::betweenness, CentralityMetric::closeness}) {
      sets.push_back(centrality(retweets, metric, config_.centrality));
    }
    for (const auto& node : retweets.nodes()) {
      central.rows.push_back({node, format_double(sets[0].scores.at(node)), format_double(sets[1].scores.at(node)),
                              format_double(sets[2].scores.at(node))});
    }
    candidates = top_k_union(sets, config_.top_k);
  }
  out_.write_csv("centrality.csv", central);
  const std::size_t from_centrality = candidates.size();
  for (const auto& path : config_.candidate_lists) {
    for (auto& id : read_candidate_list(config_.resolve(path))) candidates.insert(std::move(id));
  }
  out_.write_lines("influencer_candidates.txt", {candidates.begin(), candidates.end()});

  CsvTable decisions{{"account", "accepted", "reason"}, {}};
  std::size_t accepted = 0;
  if (!config_.profiles.empty()) {
    std::map<std::string, CandidateProfile> by_id;
    for (auto& p : load_profiles(config_.resolve(config_.profiles))) by_id[p.id] = std::move(p);
    std::vector<CandidateProfile> profiles;
    for (const auto& id : candidates) {
      const auto it = by_id.find(id);
      profiles.push_back(it != by_id.end() ? it->second : CandidateProfile{id, {}, {}, {}, {}});
    }
    Timestamp as_of{};
    if (config_.as_of) {
      as_of = *config_.as_of;
    } else {
      for (const auto& t : corpus_.tweets) as_of = std::max(as_of, t.created_at);
    }
    const Lexicon bio_terms =
        config_.lexicon.empty() ? Lexicon{} : Lexicon::load(config_.resolve(config_.lexicon));
    const LexiconClassifier bio_classifier(bio_terms, &*registry_);
    const auto result = filter_influencers(profiles, config_.influencers, as_of, [&](std::string_view bio) {
      return bio_classifier.classify_one(bio).relevant;
    });
    for (const auto& d : result) {
      accepted += d.accepted;
      decisions.rows.push_back(
          {d.id, d.accepted ? "true" : "false", d.reason ? std::string(to_string(*d.reason)) : ""});
    }
    report["influencers_as_of"] = format_rfc3339(as_of);
  } else {
    warn("network: no profiles file configured; influencer filter skipped");
  }
  out_.write_csv("influencers.csv", decisions);
  report["retweet"] = {{"nodes", retweets.node_count()},
                       {"edges", retweets.edge_count()},
                       {"top_k", config_.top_k},
                       {"candidates_from_centrality", from_centrality},
                       {"candidates", candidates.size()},
                       {"accepted", accepted}};
  out_.write_json("network_report.json", report);
  network_report_ = report;
  stage_rows_["network"] = {{"comention_edges", comention_.edge_count()},
                            {"filtered_nodes", filtered_.node_count()},
                            {"retweet_edges", retweets.edge_count()},
                            {"candidates", candidates.size()},
                            {"accepted", accepted}};
}

void Pipeline::granger() {
  auto write = [this](const std::string& name, const std::vector<CoinGrangerRows>& all) {
    CsvTable t{{"coin", "lag_hours", "f_stat", "p_value", "band"}, {}};
    for (const auto& coin : all) {
      for (const auto& r : coin.rows) {
        if (r.result) {
          t.rows.push_back({coin.coin, std::to_string(r.lag), format_double(r.result->f_statistic),
                            format_double(r.result->p_value), significance_band(r.result->p_value, config_.bands)});
          if (r.result->degenerate) warn(fmt::format("granger: {} lag {} in {} is a perfect fit", coin.coin, r.lag, name));
        } else {
          t.rows.push_back({coin.coin, std::to_string(r.lag), "", "", ""});
          warn(fmt::format("granger: {} lag {} in {}: {}", coin.coin, r.lag, name, r.error));
        }
      }
    }
    out_.write_csv(name, t);
    return t.rows.size();
  };

  std::vector<CoinGrangerRows> crypto;
  std::vector<CoinGrangerRows> plain;
  for (const auto& coin : signal_coins_) {
    const auto& s = series_.at(coin);
    const auto r_cp = log_returns(s.price);
    crypto.push_back({coin, granger_scan(log_returns(s.ss_crypto), r_cp, config_.granger_max_lag)});
    plain.push_back({coin, granger_scan(log_returns(s.ss), r_cp, config_.granger_max_lag)});
  }
  const auto rows = write("granger.csv", crypto);
  write("granger_ss.csv", plain);
  granger_rows_ = std::move(crypto);
  stage_rows_["granger"] = {{"rows", rows}, {"max_lag", config_.granger_max_lag}};
}

void Pipeline::xcorr() {
  const auto view = daily_view(grid_);
  if (view.days < config_.xcorr_daily_max + 2) {
    throw InputError(fmt::format("analysis window holds {} whole days, daily scan needs at least {}", view.days,
                                 config_.xcorr_daily_max + 2));
  }

  struct Formula {
    std::string price_name;
    std::string signal_name;
    bool returns;
    bool with_market;
  };
  const std::array<Formula, 4> formulas{{{"CP", "SS", false, false},
                                         {"CP", "SS_crypto", false, true},
                                         {"r_CP", "r_SS", true, false},
                                         {"r_CP", "r_SS_crypto", true, true}}};

  CsvTable rows{{"price_formula", "signal_formula", "coin", "resolution", "lag", "gamma", "is_best"}, {}};
  CsvTable best{{"price_formula", "signal_formula", "coin", "gamma", "lag", "resolution"}, {}};
  xcorr_best_ = nlohmann::json::array();

  for (const auto& coin : signal_coins_) {
    const auto& s = series_.at(coin);
    const auto price_daily = daily_means(s.price, view);
    // Raw levels are usually non-stationary; flag it instead of refusing.
    for (const auto& [name, values] : {std::pair<std::string, const std::vector<double>*>{"CP", &s.price},
                                       {"SS", &s.ss},
                                       {"SS_crypto", &s.ss_crypto}}) {
      try {
        if (!adf_test(*values).reject_5) {
          warn(fmt::format("xcorr: {} {} is not stationary at 5% (ADF); raw-level rows may be spurious", coin, name));
        }
      } catch (const Error& e) {
        warn(fmt::format("xcorr: ADF on {} {} failed: {}", coin, name, e.what()));
      }
    }
    for (const auto& f : formulas) {
      const auto& signal = f.with_market ? s.ss_crypto : s.ss;
      const auto signal_daily = daily_means(signal, view);
      BestLagResult scan;
      if (f.returns) {
        scan = best_lag_scan(log_returns(s.price), log_returns(signal), log_returns(price_daily),
                             log_returns(signal_daily), config_.xcorr_hourly_max, config_.xcorr_daily_max,
                             config_.mean_mode);
      } else {
        scan = best_lag_scan(s.price, signal, price_daily, signal_daily, config_.xcorr_hourly_max,
                             config_.xcorr_daily_max, config_.mean_mode);
      }
      auto emit = [&](const std::vector<LagCorrelation>& lags, Resolution res) {
        for (const auto& l : lags) {
          const bool is_best = scan.best && scan.best->resolution == res && scan.best->lag == l.lag;
          rows.rows.push_back({f.price_name, f.signal_name, coin, std::string(to_string(res)), std::to_string(l.lag),
                               opt_double(l.gamma), is_best ? "true" : "false"});
          if (!l.gamma) warn(fmt::format("xcorr: {} {}/{} {} lag {}: {}", coin, f.price_name, f.signal_name,
                                         to_string(res), l.lag, l.error));
        }
      };
      emit(scan.hourly, Resolution::hourly);
      emit(scan.daily, Resolution::daily);
      if (scan.best) {
        best.rows.push_back({f.price_name, f.signal_name, coin, format_double(scan.best->gamma),
                             std::to_string(scan.best->lag), std::string(to_string(scan.best->resolution))});
        xcorr_best_.push_back({{"price_formula", f.price_name},
                               {"signal_formula", f.signal_name},
                               {"coin", coin},
                               {"gamma", scan.best->gamma},
                               {"lag", scan.best->lag},
                               {"resolution", std::string(to_string(scan.best->resolution))}});
      }
    }
  }
  out_.write_csv("xcorr.csv", rows);
  out_.write_csv("xcorr_best.csv", best);
  stage_rows_["xcorr"] = {{"rows", rows.rows.size()}, {"best", best.rows.size()}, {"days", view.days}};
}

void Pipeline::matrix() {
  std::vector<std::string> coins;
  for (const auto& c : filtered_.nodes()) {
    const bool excluded = std::find(config_.matrix_exclude.begin(), config_.matrix_exclude.end(), c) !=
                          config_.matrix_exclude.end();
    if (excluded) continue;
    if (!prices_.count(c)) {
      warn(fmt::format("matrix: {} is in the filtered network but has no prices", c));
      continue;
    }
    coins.push_back(c);
  }
  if (coins.size() < 2) throw InputError(fmt::format("matrix needs at least 2 coins with prices, have {}", coins.size()));

  const auto grid = common_grid(prices_, coins);
  std::vector<AlignedSeries> hourly;
  std::vector<AlignedSeries> weekly;
  for (const auto& c : coins) {
    const auto values = prices_on_grid(prices_.at(c), grid);
    hourly.push_back({c, grid.at(1), log_returns(values)});
    PriceSeries window{c, {}};
    for (std::size_t h = 0; h < grid.hours; ++h) window.points.push_back({grid.at(h), values[h]});
    const auto weeks = resample_prices(window, Resolution::weekly);
    if (weeks.values.size() < 3) {
      throw InputError(fmt::format("matrix: common window holds {} whole weeks, need at least 3", weeks.values.size()));
    }
    weekly.push_back({c, weeks.bucket_start(1), log_returns(weeks.values)});
  }
  const auto m = return_correlation_matrix(hourly, weekly, coins, config_.adf_override);
  if (m.adf_override) warn("matrix: ADF stationarity requirement overridden by configuration");

  out_.write_csv("matrix.csv", matrix_table(m.coins, m.values, 6));
  out_.write_csv("matrix_pvalues.csv", matrix_table(m.coins, m.p_values, 6));
  CsvTable adf{{"coin", "resolution", "statistic", "lag", "n_obs", "crit_1", "crit_5", "crit_10", "stationary", "error"},
               {}};
  for (const auto& a : m.adf) {
    if (a.result) {
      const auto& r = *a.result;
      adf.rows.push_back({a.coin, std::string(to_string(a.resolution)), format_double(r.statistic),
                          std::to_string(r.chosen_lag), std::to_string(r.n_obs), format_double(r.critical.one),
                          format_double(r.critical.five), format_double(r.critical.ten),
                          a.stationary() ? "true" : "false", ""});
    } else {
      adf.rows.push_back({a.coin, std::string(to_string(a.resolution)), "", "", "", "", "", "", "false", a.error});
    }
    if (!a.stationary() && m.adf_override) {
      warn(fmt::format("matrix: {} {} returns fail the ADF check", a.coin, to_string(a.resolution)));
    }
  }
  out_.write_csv("matrix_adf.csv", adf);

  nlohmann::json report{{"coins", m.coins},
                        {"hourly_observations", m.hourly_n},
                        {"weekly_observations", m.weekly_n},
                        {"window_start", format_rfc3339(grid.origin)},
                        {"adf_override", m.adf_override}};
  const auto adjacency = adjacency_matrix(filtered_, m.coins);
  for (const auto& [key, upper] : {std::pair{"comention_vs_hourly", false}, std::pair{"comention_vs_weekly", true}}) {
    try {
      const auto mc = triangle_pearson(adjacency.values, m.values, upper);
      report[key] = {{"r", mc.r}, {"p_value", mc.p_value}, {"pairs", mc.n_pairs}};
    } catch (const Error& e) {
      report[key] = nullptr;
      warn(fmt::format("matrix: {} skipped: {}", key, e.what()));
    }
  }
  out_.write_json("matrix_report.json", report);
  matrix_report_ = report;
  stage_rows_["matrix"] = {{"coins", m.coins.size()}, {"hourly_n", m.hourly_n}, {"weekly_n", m.weekly_n}};
}

void Pipeline::report() {
  const auto summary = summarize_corpus(corpus_, verdicts_, *registry_);
  out_.write_json("corpus_summary.json", to_json(summary));

  auto share_table = [](const std::string& key, const std::vector<ShareRow>& rows) {
    CsvTable t{{key, "tweets", "share"}, {}};
    for (const auto& r : rows) t.rows.push_back({r.key, std::to_string(r.count), opt_double(r.share)});
    return t;
  };
  out_.write_csv("author_shares.csv", share_table("author_class", summary.author_classes));
  out_.write_csv("signal_shares.csv", share_table("label", summary.signals));

  CsvTable coins{{"coin", "mentions", "buy", "not_buy", "buy_share", "not_buy_share", "buy_to_not_buy"}, {}};
  for (const auto& c : summary.coins) {
    coins.rows.push_back({c.coin, std::to_string(c.mentions), std::to_string(c.buy), std::to_string(c.not_buy),
                          opt_double(c.buy_share), opt_double(c.not_buy_share), opt_double(c.buy_to_not_buy)});
  }
  out_.write_csv("coin_summary.csv", coins);

  CsvTable stats{{"split", "group", "tweets", "mentions", "mean"}, {}};
  CsvTable histogram{{"split", "group", "mention_count", "tweets"}, {}};
  nlohmann::json stats_json = nlohmann::json::array();
  for (const auto& [split, groups] : {std::pair{std::string("author_class"), mention_statistics_by_author(corpus_)},
                                      std::pair{std::string("label"), mention_statistics_by_label(corpus_, verdicts_)}}) {
    for (const auto& g : groups) {
      stats.rows.push_back({split, g.group, std::to_string(g.tweets), std::to_string(g.mentions), opt_double(g.mean)});
      for (const auto& [count, tweets] : g.histogram) {
        histogram.rows.push_back({split, g.group, std::to_string(count), std::to_string(tweets)});
      }
      stats_json.push_back({{"split", split},
                            {"group", g.group},
                            {"tweets", g.tweets},
                            {"mentions", g.mentions},
                            {"mean", opt_json(g.mean)}});
    }
  }
  out_.write_csv("mention_stats.csv", stats);
  out_.write_csv("mention_histogram.csv", histogram);

  const auto table = render_significance_table(granger_rows_, config_.bands);
  out_.write_csv("significance_table.csv", table.to_csv());
  out_.write_json("significance_table.json", table.to_json());

  nlohmann::json bundle{{"corpus", to_json(summary)},
                        {"mention_stats", stats_json},
                        {"significance", table.to_json()},
                        {"significance_source", "granger test of r_SS_crypto on r_CP"},
                        {"lag_convention", kLagConvention}};
  bundle["xcorr_best"] = plan_.count(Stage::xcorr) ? xcorr_best_ : nlohmann::json(nullptr);
  bundle["network"] = plan_.count(Stage::network) ? network_report_ : nlohmann::json(nullptr);
  bundle["matrix"] = plan_.count(Stage::matrix) ? matrix_report_ : nlohmann::json(nullptr);
  out_.write_json("report.json", bundle);
  stage_rows_["report"] = {{"coins", summary.coins.size()}, {"significance_rows", table.lags.size()}};
}

void Pipeline::run_stage(Stage s) {
  switch (s) {
    case Stage::ingest: ingest(); break;
    case Stage::classify: classify(); break;
    case Stage::aggregate: aggregate(); break;
    case Stage::network: network(); break;
    case Stage::granger: granger(); break;
    case Stage::xcorr: xcorr(); break;
    case Stage::matrix: matrix(); break;
    case Stage::report:
      report();
      out_.validate();
      break;
  }
}

nlohmann::json Pipeline::manifest(const std::string& status, const std::string& error) const {
  nlohmann::json m{{"tool", "coinpulse"},
                   {"version", COINPULSE_VERSION},
                   {"command", std::string(to_string(command_))},
                   {"status", status},
                   {"config", config_snapshot(config_)},
                   {"inputs", inputs_},
                   {"stages", completed_},
                   {"rows", stage_rows_},
                   {"warnings", warnings_},
                   {"outputs", out_.digests()},
                   {"timings_seconds", timings_}};
  if (!error.empty()) m["error"] = error;
  return m;
}

nlohmann::json Pipeline::run() {
  plan_ = plan(command_);
  for (const auto s : plan_) {
    for (const auto& name : stage_outputs(s)) out_.remove(name);
  }
  out_.remove("manifest.json");

  for (const auto s : kStages) {
    if (!plan_.count(s)) continue;
    const auto start = std::chrono::steady_clock::now();
    try {
      run_stage(s);
      if (s != Stage::report) out_.validate();
    } catch (const std::exception& e) {
      const StageError error(s, e.what());
      out_.write_json("manifest.json", manifest("failed", error.what()));
      throw error;
    }
    timings_[std::string(to_string(s))] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    completed_.emplace_back(to_string(s));
  }
  auto m = manifest("ok", "");
  out_.write_json("manifest.json", m);
  return m;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::ingest: return "ingest";
    case Command::classify: return "classify";
    case Command::signals: return "signals";
    case Command::network: return "network";
    case Command::granger: return "granger";
    case Command::xcorr: return "xcorr";
    case Command::matrix: return "matrix";
    case Command::report: return "report";
    case Command::all: return "all";
  }
  return "";
}

std::optional<Command> parse_command(std::string_view text) {
  for (const auto c : {Command::ingest, Command::classify, Command::signals, Command::network, Command::granger,
                       Command::xcorr, Command::matrix, Command::report, Command::all}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::classify: return "classify";
    case Stage::aggregate: return "aggregate";
    case Stage::network: return "network";
    case Stage::granger: return "granger";
    case Stage::xcorr: return "xcorr";
    case Stage::matrix: return "matrix";
    case Stage::report: return "report";
  }
  return "";
}

int exit_code(Stage s) {
  switch (s) {
    case Stage::ingest: return 3;
    case Stage::classify: return 4;
    case Stage::aggregate: return 5;
    case Stage::network: return 6;
    case Stage::granger:
    case Stage::xcorr:
    case Stage::matrix: return 7;
    case Stage::report: return 8;
  }
  return 1;
}

StageError::StageError(Stage stage, const std::string& message)
    : Error(fmt::format("stage {}: {}", to_string(stage), message)), stage_(stage) {}

nlohmann::json run_pipeline(const PipelineConfig& config, Command command) {
  if (config.workers > 0) set_worker_count(config.workers);
  return Pipeline(config, command).run();
}

nlohmann::json manifest_without_timings(nlohmann::json manifest) {
  manifest.erase("timings_seconds");
  return manifest;
}

}  // namespace coinpulse
