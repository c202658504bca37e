#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "coinpulse/cli/output.hpp"
#include "coinpulse/corpus/corpus.hpp"
#include "coinpulse/econometrics/granger.hpp"
#include "coinpulse/signals/classifier.hpp"

namespace coinpulse {

struct ShareRow {
  std::string key;
  std::size_t count = 0;
  /// count / total; empty when the breakdown has no members.
  std::optional<double> share;
};

struct CoinSummary {
  std::string coin;
  /// Tweets mentioning the coin.
  std::size_t mentions = 0;
  std::size_t buy = 0;
  std::size_t not_buy = 0;
  std::optional<double> buy_share;
  std::optional<double> not_buy_share;
  /// buy / not_buy; empty when not_buy is 0.
  std::optional<double> buy_to_not_buy;
};

struct CorpusSummary {
  std::size_t tweets = 0;
  std::size_t relevant = 0;
  std::vector<ShareRow> author_classes;
  /// Over relevant (labeled) tweets.
  std::vector<ShareRow> signals;
  /// Registry order.
  std::vector<CoinSummary> coins;
};

/// Descriptive statistics of a classified corpus. `verdicts` is
/// index-aligned with `corpus.tweets`.
CorpusSummary summarize_corpus(const Corpus& corpus, std::span<const ClassifierVerdict> verdicts,
                               const CoinRegistry& registry);
nlohmann::json to_json(const CorpusSummary& summary);

/// Label of the tightest band `p` falls under ("<0.01"), or "" when p is not
/// below any band. `bands` must be strictly increasing.
std::string significance_band(double p, std::span<const double> bands);

struct CoinGrangerRows {
  std::string coin;
  std::vector<GrangerRow> rows;
};

struct SignificanceCell {
  std::optional<double> p_value;
  std::string band;
};

/// Lags as rows, coins as columns.
struct SignificanceTable {
  std::vector<std::string> coins;
  std::vector<std::size_t> lags;
  /// cells[lag_index][coin_index]
  std::vector<std::vector<SignificanceCell>> cells;

  /// `lag_hours,<coin>,<coin>_band,...`
  CsvTable to_csv() const;
  nlohmann::json to_json() const;
};

SignificanceTable render_significance_table(std::span<const CoinGrangerRows> rows, std::span<const double> bands);

}  // namespace coinpulse
