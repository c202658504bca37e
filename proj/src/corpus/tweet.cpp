#include "coinpulse/corpus/tweet.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "coinpulse/error.hpp"

namespace coinpulse {

using nlohmann::json;

std::string_view to_string(AuthorClass c) {
  return c == AuthorClass::influencer ? "influencer" : "news";
}

std::optional<AuthorClass> parse_author_class(std::string_view text) {
  if (text == "influencer") return AuthorClass::influencer;
  if (text == "news") return AuthorClass::news;
  return std::nullopt;
}

namespace {

struct FieldError {
  std::string reason;
  std::string detail;
};

const json* require(const json& obj, const char* key, FieldError& err) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    err = {"missing field", key};
    return nullptr;
  }
  return &*it;
}

std::optional<Tweet> decode(const json& obj, FieldError& err) {
  if (!obj.is_object()) {
    err = {"invalid json", "record is not an object"};
    return std::nullopt;
  }
  Tweet t;
  for (const char* key : {"id", "author_id", "author_class", "created_at", "text"}) {
    const json* v = require(obj, key, err);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      err = {"invalid field", key};
      return std::nullopt;
    }
  }
  t.id = obj["id"].get<std::string>();
  t.author_id = obj["author_id"].get<std::string>();
  t.text = obj["text"].get<std::string>();
  if (t.id.empty()) {
    err = {"invalid field", "id"};
    return std::nullopt;
  }
  const auto cls = parse_author_class(obj["author_class"].get<std::string>());
  if (!cls) {
    err = {"invalid field", "author_class"};
    return std::nullopt;
  }
  t.author_class = *cls;
  try {
    t.created_at = parse_rfc3339(obj["created_at"].get<std::string>());
  } catch (const InputError&) {
    err = {"invalid field", "created_at"};
    return std::nullopt;
  }

  if (const auto it = obj.find("followers"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      err = {"invalid field", "followers"};
      return std::nullopt;
    }
    t.followers = it->get<std::int64_t>();
  }
  if (const auto it = obj.find("engagement"); it != obj.end() && !it->is_null()) {
    if (!it->is_number() || it->get<double>() < 0.0) {
      err = {"invalid field", "engagement"};
      return std::nullopt;
    }
    t.engagement = it->get<double>();
  }
  if (const auto it = obj.find("retweeted_author_id"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) {
      err = {"invalid field", "retweeted_author_id"};
      return std::nullopt;
    }
    t.retweeted_author_id = it->get<std::string>();
  }
  return t;
}

}  // namespace

TweetLoad parse_tweets(std::istream& in) {
  TweetLoad out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      out.rejections.push_back({line_no, "empty line", ""});
      continue;
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      out.rejections.push_back({line_no, "invalid json", e.what()});
      continue;
    }
    FieldError err;
    auto tweet = decode(obj, err);
    if (!tweet) {
      out.rejections.push_back({line_no, err.reason, err.detail});
      continue;
    }
    if (!seen.insert(tweet->id).second) {
      out.rejections.push_back({line_no, "duplicate id", tweet->id});
      continue;
    }
    out.tweets.push_back(std::move(*tweet));
  }
  return out;
}

TweetLoad load_tweets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read tweets file '{}'", path.string()));
  return parse_tweets(in);
}

std::string to_jsonl(const Tweet& tweet) {
  json obj = {{"id", tweet.id},
              {"author_id", tweet.author_id},
              {"author_class", std::string(to_string(tweet.author_class))},
              {"created_at", format_rfc3339(tweet.created_at)},
              {"text", tweet.text}};
  if (tweet.followers) obj["followers"] = *tweet.followers;
  if (tweet.engagement) obj["engagement"] = *tweet.engagement;
  if (tweet.retweeted_author_id) obj["retweeted_author_id"] = *tweet.retweeted_author_id;
  return obj.dump();
}

}  // namespace coinpulse
