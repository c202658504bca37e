#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coinpulse/corpus/prices.hpp"
#include "coinpulse/corpus/registry.hpp"
#include "coinpulse/corpus/tweet.hpp"

namespace coinpulse {

/// Tweets with their detected coin mentions, index-aligned. Built once,
/// read-only afterwards. Tweets that mention no coin are kept: they feed the
/// market-level signal counts.
struct Corpus {
  std::vector<Tweet> tweets;
  std::vector<MentionSet> mentions;

  std::size_t size() const { return tweets.size(); }
};

/// Detects mentions for every tweet (parallel over tweets).
Corpus index_corpus(std::vector<Tweet> tweets, const CoinRegistry& registry);

/// Tweet counts per bucket, origin at the bucket containing the earliest
/// tweet. Every tweet lands in exactly one bucket.
BucketSeries count_by_bucket(std::span<const Tweet> tweets, Resolution resolution);

struct MentionGroupStats {
  std::string group;
  std::size_t tweets = 0;
  std::size_t mentions = 0;
  /// total mentions / tweets; empty for a group with no tweets.
  std::optional<double> mean;
  /// mention count -> number of tweets with that many mentions.
  std::map<std::size_t, std::size_t> histogram;
};

/// Per-group mention statistics. `group_of[i]` names tweet i's group; tweets
/// with an empty key are left out. Groups listed in `groups` are always
/// reported, in that order, even when empty.
std::vector<MentionGroupStats> mention_statistics(const Corpus& corpus, std::span<const std::string> group_of,
                                                  std::span<const std::string> groups);

/// Split by author class ("influencer", "news").
std::vector<MentionGroupStats> mention_statistics_by_author(const Corpus& corpus);

}  // namespace coinpulse
