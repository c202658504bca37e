#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coinpulse/corpus/time.hpp"

namespace coinpulse {

enum class AuthorClass { influencer, news };

std::string_view to_string(AuthorClass c);
std::optional<AuthorClass> parse_author_class(std::string_view text);

struct Tweet {
  std::string id;
  std::string author_id;
  AuthorClass author_class = AuthorClass::influencer;
  Timestamp created_at{};
  std::string text;
  std::optional<std::int64_t> followers;
  std::optional<double> engagement;
  /// Author of the original post when this record is a retweet.
  std::optional<std::string> retweeted_author_id;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

/// One skipped input line. `reason` is a fixed vocabulary ("invalid json",
/// "missing field", "invalid field", "duplicate id", "empty line"); `detail`
/// names the offending field or value.
struct Rejection {
  std::size_t line = 0;
  std::string reason;
  std::string detail;
};

struct TweetLoad {
  std::vector<Tweet> tweets;
  std::vector<Rejection> rejections;
};

/// Reads tweets.jsonl. Valid records are kept in file order; malformed lines
/// are skipped and reported. Throws InputError if the file can't be opened.
TweetLoad load_tweets(const std::filesystem::path& path);
TweetLoad parse_tweets(std::istream& in);

/// Serializes one tweet as a single JSONL record that parse_tweets reads back.
std::string to_jsonl(const Tweet& tweet);

}  // namespace coinpulse
