#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coinpulse/corpus/corpus.hpp"
#include "coinpulse/corpus/time.hpp"
#include "coinpulse/signals/classifier.hpp"

namespace coinpulse {

/// Pseudo coin id for relevant tweets that mention no coin.
inline constexpr std::string_view kMarketId = "MARKET";

/// Length of the trailing signal window.
inline constexpr Hours kSignalWindow{24};

enum class Population { pooled, influencers, news };
std::string_view to_string(Population p);
Population parse_population(std::string_view text);
bool in_population(AuthorClass c, Population p);

/// Consecutive clock hours starting at `origin`.
struct HourlyGrid {
  Timestamp origin{};
  std::size_t hours = 0;

  Timestamp at(std::size_t i) const { return origin + Hours{static_cast<std::int64_t>(i)}; }
};

/// Buy / not-buy counts of the tweets in (window_end - 24h, window_end].
struct SignalCounts {
  std::string coin_id;
  Timestamp window_end{};
  std::int64_t n_buy = 0;
  std::int64_t n_not_buy = 0;
};

struct CountPair {
  std::int64_t buy = 0;
  std::int64_t not_buy = 0;
  friend bool operator==(const CountPair&, const CountPair&) = default;
};

/// Trailing-window counts for every requested coin plus MARKET over a grid.
class SignalCountTable {
 public:
  SignalCountTable(HourlyGrid grid, std::vector<std::string> ids);

  const HourlyGrid& grid() const { return grid_; }
  /// Coin ids in table order; MARKET is last.
  const std::vector<std::string>& ids() const { return ids_; }
  bool contains(std::string_view id) const;
  const std::vector<CountPair>& series(std::string_view id) const;
  std::vector<CountPair>& series(std::string_view id);
  SignalCounts at(std::string_view id, std::size_t hour) const;

  friend bool operator==(const SignalCountTable& a, const SignalCountTable& b) {
    return a.grid_.origin == b.grid_.origin && a.grid_.hours == b.grid_.hours && a.ids_ == b.ids_ && a.rows_ == b.rows_;
  }

 private:
  HourlyGrid grid_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<CountPair>> rows_;
};

/// Counts labeled tweets per coin over the trailing 24-hour window ending at
/// every grid hour. A tweet mentioning m >= 1 coins counts once for each of
/// them; a relevant tweet with no mention counts for MARKET only. Irrelevant
/// tweets and tweets outside `population` are ignored. Mentions of coins not
/// in `coins` are dropped. Parallel over coins.
SignalCountTable aggregate_signal_counts(const Corpus& corpus, std::span<const ClassifierVerdict> verdicts,
                                         const std::vector<std::string>& coins, HourlyGrid grid,
                                         Population population = Population::pooled);

namespace serial {
SignalCountTable aggregate_signal_counts(const Corpus& corpus, std::span<const ClassifierVerdict> verdicts,
                                         const std::vector<std::string>& coins, HourlyGrid grid,
                                         Population population = Population::pooled);
}  // namespace serial

/// (1 + n_buy) / (1 + n_not_buy)
double social_signal(const SignalCounts& counts);

/// (1 + n_buy + market n_buy) / (1 + n_not_buy + market n_not_buy). Throws
/// InputError when the two windows end at different hours.
double social_signal_with_market(const SignalCounts& coin, const SignalCounts& market);

enum class SignalVariant { plain, with_market };
std::string_view to_string(SignalVariant v);

struct SocialSignalSeries {
  std::string coin_id;
  SignalVariant variant = SignalVariant::plain;
  HourlyGrid grid;
  std::vector<double> values;
};

SocialSignalSeries social_signal_series(const SignalCountTable& table, std::string_view coin, SignalVariant variant);

enum class ReturnBase { price, social_signal };

struct ReturnSeries {
  ReturnBase base = ReturnBase::price;
  std::string coin_id;
  Resolution resolution = Resolution::hourly;
  std::vector<double> values;
};

/// r(t) = ln(v(t) / v(t-1)) for t = 1..n-1. Throws InputError naming the
/// first non-positive (or non-finite) index, or when fewer than 2 values.
std::vector<double> log_returns(std::span<const double> values);

/// Split by collapsed label ("buy", "not_buy"); irrelevant tweets left out.
std::vector<MentionGroupStats> mention_statistics_by_label(const Corpus& corpus,
                                                           std::span<const ClassifierVerdict> verdicts);

}  // namespace coinpulse
