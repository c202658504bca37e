#include "coinpulse/signals/social_signal.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"

namespace coinpulse {

std::string_view to_string(Population p) {
  switch (p) {
    case Population::pooled: return "pooled";
    case Population::influencers: return "influencers";
    case Population::news: return "news";
  }
  return "pooled";
}

Population parse_population(std::string_view text) {
  if (text == "pooled") return Population::pooled;
  if (text == "influencers") return Population::influencers;
  if (text == "news") return Population::news;
  throw InputError(fmt::format("unknown population '{}' (expected pooled|influencers|news)", text));
}

bool in_population(AuthorClass c, Population p) {
  switch (p) {
    case Population::pooled: return true;
    case Population::influencers: return c == AuthorClass::influencer;
    case Population::news: return c == AuthorClass::news;
  }
  return true;
}

std::string_view to_string(SignalVariant v) { return v == SignalVariant::plain ? "plain" : "with_market"; }

SignalCountTable::SignalCountTable(HourlyGrid grid, std::vector<std::string> ids) : grid_(grid), ids_(std::move(ids)) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) throw InputError(fmt::format("duplicate coin id '{}'", ids_[i]));
  }
  rows_.assign(ids_.size(), std::vector<CountPair>(grid_.hours));
}

bool SignalCountTable::contains(std::string_view id) const { return index_.count(std::string(id)) != 0; }

const std::vector<CountPair>& SignalCountTable::series(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) throw InputError(fmt::format("no signal counts for '{}'", id));
  return rows_[it->second];
}

std::vector<CountPair>& SignalCountTable::series(std::string_view id) {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) throw InputError(fmt::format("no signal counts for '{}'", id));
  return rows_[it->second];
}

SignalCounts SignalCountTable::at(std::string_view id, std::size_t hour) const {
  const auto& row = series(id);
  return {std::string(id), grid_.at(hour), row.at(hour).buy, row.at(hour).not_buy};
}

namespace {

struct Event {
  // Index of the first grid hour whose window contains the tweet.
  std::int64_t first_hour;
  bool buy;
};

std::vector<std::string> table_ids(const std::vector<std::string>& coins) {
  std::vector<std::string> ids = coins;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  ids.erase(std::remove(ids.begin(), ids.end(), std::string(kMarketId)), ids.end());
  ids.emplace_back(kMarketId);
  return ids;
}

std::vector<std::vector<Event>> collect_events(const Corpus& corpus, std::span<const ClassifierVerdict> verdicts,
                                               const std::vector<std::string>& ids, HourlyGrid grid,
                                               Population population) {
  if (verdicts.size() != corpus.size()) throw InputError("aggregate_signal_counts: verdicts not aligned with corpus");
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < ids.size(); ++i) slot.emplace(ids[i], i);
  const std::size_t market = ids.size() - 1;

  std::vector<std::vector<Event>> events(ids.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& v = verdicts[i];
    if (!v.relevant || !v.label) continue;
    const auto& tweet = corpus.tweets[i];
    if (!in_population(tweet.author_class, population)) continue;
    const Event e{bucket_index(grid.origin, Resolution::hourly, bucket_ceil(tweet.created_at, Resolution::hourly)),
                  *v.label == SignalLabel::buy};
    const auto& mentions = corpus.mentions[i];
    if (mentions.empty()) {
      events[market].push_back(e);
      continue;
    }
    for (const auto& coin : mentions) {
      if (const auto it = slot.find(coin); it != slot.end() && it->second != market) events[it->second].push_back(e);
    }
  }
  return events;
}

// A tweet whose ceiling hour is c falls in the windows ending at c .. c+23.
std::vector<CountPair> window_counts(const std::vector<Event>& events, std::size_t hours) {
  const std::int64_t span = kSignalWindow.count();
  const auto n = static_cast<std::int64_t>(hours);
  std::vector<CountPair> arrivals(static_cast<std::size_t>(n + span), CountPair{});
  for (const auto& e : events) {
    const std::int64_t slot = e.first_hour + span - 1;
    if (slot < 0 || slot >= n + span - 1) continue;
    auto& a = arrivals[static_cast<std::size_t>(slot)];
    (e.buy ? a.buy : a.not_buy) += 1;
  }
  std::vector<CountPair> out(hours);
  CountPair running;
  for (std::int64_t s = 0; s < n + span - 1; ++s) {
    running.buy += arrivals[static_cast<std::size_t>(s)].buy;
    running.not_buy += arrivals[static_cast<std::size_t>(s)].not_buy;
    if (s >= span) {
      running.buy -= arrivals[static_cast<std::size_t>(s - span)].buy;
      running.not_buy -= arrivals[static_cast<std::size_t>(s - span)].not_buy;
    }
    const std::int64_t hour = s - (span - 1);
    if (hour >= 0) out[static_cast<std::size_t>(hour)] = running;
  }
  return out;
}

}  // namespace

SignalCountTable aggregate_signal_counts(const Corpus& corpus, std::span<const ClassifierVerdict> verdicts,
                                         const std::vector<std::string>& coins, HourlyGrid grid,
                                         Population population) {
  SignalCountTable table(grid, table_ids(coins));
  const auto events = collect_events(corpus, verdicts, table.ids(), grid, population);
  parallel_for(table.ids().size(),
               [&](std::size_t i) { table.series(table.ids()[i]) = window_counts(events[i], grid.hours); });
  return table;
}

namespace serial {

SignalCountTable aggregate_signal_counts(const Corpus& corpus, std::span<const ClassifierVerdict> verdicts,
                                         const std::vector<std::string>& coins, HourlyGrid grid,
                                         Population population) {
  SignalCountTable table(grid, table_ids(coins));
  const auto events = collect_events(corpus, verdicts, table.ids(), grid, population);
  for (std::size_t i = 0; i < table.ids().size(); ++i) {
    table.series(table.ids()[i]) = window_counts(events[i], grid.hours);
  }
  return table;
}

}  // namespace serial

double social_signal(const SignalCounts& counts) {
  return (1.0 + static_cast<double>(counts.n_buy)) / (1.0 + static_cast<double>(counts.n_not_buy));
}

double social_signal_with_market(const SignalCounts& coin, const SignalCounts& market) {
  if (coin.window_end != market.window_end) {
    throw InputError(fmt::format("social_signal_with_market: window mismatch ({} vs {})",
                                 format_rfc3339(coin.window_end), format_rfc3339(market.window_end)));
  }
  return (1.0 + static_cast<double>(coin.n_buy + market.n_buy)) /
         (1.0 + static_cast<double>(coin.n_not_buy + market.n_not_buy));
}

SocialSignalSeries social_signal_series(const SignalCountTable& table, std::string_view coin, SignalVariant variant) {
  SocialSignalSeries out{std::string(coin), variant, table.grid(), {}};
  out.values.reserve(table.grid().hours);
  for (std::size_t h = 0; h < table.grid().hours; ++h) {
    const auto c = table.at(coin, h);
    out.values.push_back(variant == SignalVariant::plain ? social_signal(c)
                                                         : social_signal_with_market(c, table.at(kMarketId, h)));
  }
  return out;
}

std::vector<double> log_returns(std::span<const double> values) {
  if (values.size() < 2) throw InputError(fmt::format("log_returns: need at least 2 values, got {}", values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw InputError(fmt::format("log_returns: value at index {} is not positive and finite", i));
    }
  }
  std::vector<double> out(values.size() - 1);
  for (std::size_t i = 1; i < values.size(); ++i) out[i - 1] = std::log(values[i] / values[i - 1]);
  return out;
}

std::vector<MentionGroupStats> mention_statistics_by_label(const Corpus& corpus,
                                                           std::span<const ClassifierVerdict> verdicts) {
  if (verdicts.size() != corpus.size()) throw InputError("mention_statistics: verdicts not aligned with corpus");
  std::vector<std::string> keys(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (verdicts[i].relevant && verdicts[i].label) keys[i] = std::string(to_string(*verdicts[i].label));
  }
  const std::vector<std::string> groups{"buy", "not_buy"};
  return mention_statistics(corpus, keys, groups);
}

}  // namespace coinpulse
