#include "coinpulse/cli/report.hpp"

#include <set>

#include <fmt/format.h>

#include "coinpulse/error.hpp"

namespace coinpulse {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

CorpusSummary summarize_corpus(const Corpus& corpus, std::span<const ClassifierVerdict> verdicts,
                               const CoinRegistry& registry) {
  if (verdicts.size() != corpus.size()) {
    throw InputError(fmt::format("summary: {} verdicts for {} tweets", verdicts.size(), corpus.size()));
  }
  CorpusSummary s;
  s.tweets = corpus.size();
  std::size_t influencer = 0;
  std::size_t buy = 0;
  std::vector<CoinSummary> coins(registry.coins().size());
  for (std::size_t c = 0; c < coins.size(); ++c) coins[c].coin = registry.coins()[c].id;

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    influencer += corpus.tweets[i].author_class == AuthorClass::influencer;
    const auto& v = verdicts[i];
    if (v.relevant) {
      ++s.relevant;
      buy += v.label == SignalLabel::buy;
    }
    for (const auto& id : corpus.mentions[i]) {
      const auto idx = registry.index_of(id);
      if (!idx) continue;
      auto& c = coins[*idx];
      ++c.mentions;
      if (v.relevant) (v.label == SignalLabel::buy ? c.buy : c.not_buy) += 1;
    }
  }
  const std::size_t news = s.tweets - influencer;
  s.author_classes = {{"influencer", influencer, ratio(influencer, s.tweets)}, {"news", news, ratio(news, s.tweets)}};
  const std::size_t not_buy = s.relevant - buy;
  s.signals = {{"buy", buy, ratio(buy, s.relevant)}, {"not_buy", not_buy, ratio(not_buy, s.relevant)}};
  for (auto& c : coins) {
    c.buy_share = ratio(c.buy, c.buy + c.not_buy);
    c.not_buy_share = ratio(c.not_buy, c.buy + c.not_buy);
    c.buy_to_not_buy = ratio(c.buy, c.not_buy);
  }
  s.coins = std::move(coins);
  return s;
}

nlohmann::json to_json(const CorpusSummary& s) {
  auto shares = [](const std::vector<ShareRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) out.push_back({{"key", r.key}, {"count", r.count}, {"share", optional_json(r.share)}});
    return out;
  };
  nlohmann::json coins = nlohmann::json::array();
  for (const auto& c : s.coins) {
    coins.push_back({{"coin", c.coin},
                     {"mentions", c.mentions},
                     {"buy", c.buy},
                     {"not_buy", c.not_buy},
                     {"buy_share", optional_json(c.buy_share)},
                     {"not_buy_share", optional_json(c.not_buy_share)},
                     {"buy_to_not_buy", optional_json(c.buy_to_not_buy)}});
  }
  return {{"tweets", s.tweets},
          {"relevant", s.relevant},
          {"author_classes", shares(s.author_classes)},
          {"signals", shares(s.signals)},
          {"coins", coins}};
}

std::string significance_band(double p, std::span<const double> bands) {
  for (const double b : bands) {
    if (p < b) return "<" + format_double(b);
  }
  return "";
}

SignificanceTable render_significance_table(std::span<const CoinGrangerRows> rows, std::span<const double> bands) {
  SignificanceTable t;
  std::set<std::size_t> lags;
  for (const auto& coin : rows) {
    t.coins.push_back(coin.coin);
    for (const auto& r : coin.rows) lags.insert(r.lag);
  }
  t.lags.assign(lags.begin(), lags.end());
  t.cells.assign(t.lags.size(), std::vector<SignificanceCell>(t.coins.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (const auto& r : rows[c].rows) {
      if (!r.result) continue;
      const auto li = static_cast<std::size_t>(std::distance(lags.begin(), lags.find(r.lag)));
      t.cells[li][c] = {r.result->p_value, significance_band(r.result->p_value, bands)};
    }
  }
  return t;
}

CsvTable SignificanceTable::to_csv() const {
  CsvTable out;
  out.header.push_back("lag_hours");
  for (const auto& c : coins) {
    out.header.push_back(c);
    out.header.push_back(c + "_band");
  }
  for (std::size_t l = 0; l < lags.size(); ++l) {
    std::vector<std::string> row{std::to_string(lags[l])};
    for (const auto& cell : cells[l]) {
      row.push_back(cell.p_value ? format_double(*cell.p_value) : "");
      row.push_back(cell.band);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

nlohmann::json SignificanceTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t l = 0; l < lags.size(); ++l) {
    nlohmann::json row{{"lag_hours", lags[l]}};
    nlohmann::json values = nlohmann::json::object();
    for (std::size_t c = 0; c < coins.size(); ++c) {
      values[coins[c]] = {{"p_value", optional_json(cells[l][c].p_value)}, {"band", cells[l][c].band}};
    }
    row["coins"] = std::move(values);
    rows.push_back(std::move(row));
  }
  return {{"coins", coins}, {"rows", rows}};
}

}  // namespace coinpulse
