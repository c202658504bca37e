#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coinpulse/corpus/time.hpp"

namespace coinpulse {

struct InfluencerCriteria {
  std::int64_t min_followers = 5000;
  /// Mean engagement over the most recent `engagement_sample` tweets.
  double min_avg_engagement = 200.0;
  std::int64_t activity_window_days = 90;
  std::size_t engagement_sample = 10;
};

/// Profile data gathered for one candidate account. Missing fields reject the
/// candidate with reason missing_data.
struct CandidateProfile {
  std::string id;
  std::optional<std::int64_t> followers;
  std::optional<Timestamp> last_tweet_at;
  /// Engagement (likes + retweets) of recent tweets, most recent first.
  std::optional<std::vector<double>> recent_engagements;
  std::optional<std::string> bio;
};

enum class InfluencerRejection { missing_data, followers, inactivity, engagement, description };
std::string_view to_string(InfluencerRejection r);

struct InfluencerDecision {
  std::string id;
  bool accepted = false;
  std::optional<InfluencerRejection> reason;
};

using DescriptionFilter = std::function<bool(std::string_view bio)>;

/// Accepts a candidate iff followers >= min_followers, the last tweet is at
/// most activity_window_days before `as_of`, the mean of its latest
/// engagement_sample engagements is >= min_avg_engagement, and the bio passes
/// `description_filter`. Checks run in that order; a rejection carries the
/// first failing one. Output follows input order.
std::vector<InfluencerDecision> filter_influencers(std::span<const CandidateProfile> candidates,
                                                   const InfluencerCriteria& criteria, Timestamp as_of,
                                                   const DescriptionFilter& description_filter);

/// profiles.jsonl: {"id", "followers", "last_tweet_at", "recent_engagements", "bio"}
/// per line. Absent keys stay empty; a malformed line throws InputError.
std::vector<CandidateProfile> load_profiles(const std::filesystem::path& path);
std::vector<CandidateProfile> parse_profiles(std::istream& in);

}  // namespace coinpulse
