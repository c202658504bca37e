// Writes the synthetic test corpus: tweets, hourly prices, coin registry,
// lexicon, influencer profiles, a candidate watch list and a config.
//
//   make_fixture OUT_DIR [SEED]
//
// Each coin has a latent sentiment that drives both the buy/not-buy mix of
// its tweets and, three hours later, its price returns.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "coinpulse/corpus/time.hpp"

namespace {

using coinpulse::Hours;
using coinpulse::Timestamp;

struct CoinSpec {
  const char* id;
  std::vector<std::string> aliases;
  std::vector<std::string> tags;
  double popularity;
  double start_price;
  bool priced;
};

const std::vector<CoinSpec>& coins() {
  static const std::vector<CoinSpec> specs{
      {"BTC", {"btc", "bitcoin"}, {"layer-1", "pow", "store-of-value"}, 0.25, 42000.0, true},
      {"ETH", {"eth", "ethereum", "ether"}, {"layer-1", "smart-contracts", "pos"}, 0.18, 3200.0, true},
      {"DOGE", {"doge", "dogecoin"}, {"meme", "pow"}, 0.10, 0.15, true},
      {"SOL", {"sol", "solana"}, {"layer-1", "smart-contracts", "pos"}, 0.08, 150.0, true},
      {"BNB", {"bnb", "binance coin"}, {"exchange", "smart-contracts"}, 0.08, 480.0, true},
      {"XRP", {"xrp", "ripple"}, {"payments"}, 0.08, 0.8, true},
      {"ADA", {"ada", "cardano"}, {"layer-1", "pos", "smart-contracts"}, 0.07, 1.3, true},
      {"DOT", {"dot", "polkadot"}, {"interoperability", "pos"}, 0.05, 25.0, true},
      {"MATIC", {"matic", "polygon"}, {"layer-2", "scaling"}, 0.05, 2.1, true},
      {"LTC", {"ltc", "litecoin"}, {"pow", "payments"}, 0.04, 140.0, true},
      {"SHIB", {"shib", "shiba inu"}, {"meme"}, 0.012, 0.00003, false},
      {"LINK", {"chainlink"}, {"oracle", "defi"}, 0.006, 0.0, false},
      {"UNI", {"uniswap"}, {"defi", "exchange"}, 0.004, 0.0, false},
  };
  return specs;
}

const std::vector<std::string> kBullish{"moon", "bullish", "pump", "breakout", "long", "accumulate"};
const std::vector<std::string> kBearish{"dump", "bearish", "crash", "short", "rekt", "sell"};
const std::vector<std::string> kRelevance{"crypto", "market", "altcoin", "blockchain"};
const std::vector<std::string> kFiller{"today", "looking", "chart", "watch", "update", "week", "trend",
                                       "volume", "thoughts", "now", "again", "big", "move", "coming"};
const std::vector<std::string> kOffTopic{"coffee", "football", "weather", "music", "movie", "dinner", "travel"};

constexpr std::size_t kWeeks = 30;
constexpr std::size_t kHours = kWeeks * 7 * 24;
constexpr std::size_t kTweets = 10000;
constexpr std::size_t kInfluencers = 150;
constexpr std::size_t kNews = 30;
constexpr std::size_t kSignalLead = 3;

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string list(const std::vector<std::string>& items) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) s += fmt::format("{}\"{}\"", i ? ", " : "", items[i]);
  return s + "]";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: make_fixture OUT_DIR [SEED]\n");
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20240501;
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto start = coinpulse::parse_rfc3339("2022-01-03T00:00:00Z");
  const auto& specs = coins();

  // Latent sentiment per coin (plus the market at index specs.size()).
  std::vector<std::vector<double>> sentiment(specs.size() + 1, std::vector<double>(kHours));
  for (auto& s : sentiment) {
    double v = 0.0;
    for (auto& x : s) {
      v = 0.97 * v + 0.25 * normal(rng);
      x = v;
    }
  }

  {
    nlohmann::json reg{{"coins", nlohmann::json::array()}};
    for (const auto& c : specs) reg["coins"].push_back({{"id", c.id}, {"aliases", c.aliases}, {"tags", c.tags}});
    write_file(dir / "registry.json", reg.dump(2) + "\n");
  }

  write_file(dir / "lexicon.toml", fmt::format("relevance_terms = {}\nbullish_terms = {}\nbearish_terms = {}\n",
                                               list(kRelevance), list(kBullish), list(kBearish)));

  {
    std::string csv = "timestamp,coin,price\n";
    for (std::size_t c = 0; c < specs.size(); ++c) {
      if (!specs[c].priced) continue;
      double log_price = std::log(specs[c].start_price);
      for (std::size_t h = 0; h < kHours; ++h) {
        if (h > kSignalLead) {
          const auto& s = sentiment[c];
          log_price += 0.02 * (s[h - kSignalLead] - s[h - kSignalLead - 1]) + 0.004 * normal(rng);
        }
        csv += fmt::format("{},{},{:.10g}\n", coinpulse::format_rfc3339(start + Hours{static_cast<std::int64_t>(h)}),
                           specs[c].id, std::exp(log_price));
      }
    }
    write_file(dir / "prices.csv", csv);
  }

  std::vector<std::string> authors;
  for (std::size_t i = 0; i < kInfluencers; ++i) authors.push_back(fmt::format("inf{:03}", i));
  for (std::size_t i = 0; i < kNews; ++i) authors.push_back(fmt::format("news{:02}", i));
  std::vector<std::int64_t> followers(authors.size());
  for (auto& f : followers) f = static_cast<std::int64_t>(std::exp(8.0 + 1.6 * normal(rng)));
  // Zipf-like pick of retweeted accounts.
  std::vector<double> rt_weight(kInfluencers);
  for (std::size_t i = 0; i < kInfluencers; ++i) rt_weight[i] = 1.0 / std::pow(static_cast<double>(i + 1), 1.1);
  std::discrete_distribution<std::size_t> rt_pick(rt_weight.begin(), rt_weight.end());
  std::vector<double> popularity;
  for (const auto& c : specs) popularity.push_back(c.popularity);
  std::discrete_distribution<std::size_t> coin_pick(popularity.begin(), popularity.end());
  std::discrete_distribution<int> mention_count({0.22, 0.50, 0.20, 0.08});

  std::string jsonl;
  for (std::size_t n = 0; n < kTweets; ++n) {
    const std::size_t author = unit(rng) < 0.8 ? std::uniform_int_distribution<std::size_t>(0, kInfluencers - 1)(rng)
                                               : kInfluencers + std::uniform_int_distribution<std::size_t>(0, kNews - 1)(rng);
    const auto second = std::uniform_int_distribution<std::int64_t>(0, static_cast<std::int64_t>(kHours) * 3600 - 1)(rng);
    const Timestamp at = start + std::chrono::seconds{second};
    const auto hour = static_cast<std::size_t>(second / 3600);

    std::vector<std::size_t> mentioned;
    const int m = mention_count(rng);
    while (static_cast<int>(mentioned.size()) < m) {
      const auto c = coin_pick(rng);
      if (std::find(mentioned.begin(), mentioned.end(), c) == mentioned.end()) mentioned.push_back(c);
    }
    std::vector<std::string> words;
    bool off_topic = false;
    if (mentioned.empty()) {
      off_topic = unit(rng) < 0.5;
      words.push_back(off_topic ? pick(kOffTopic, rng) : pick(kRelevance, rng));
    }
    for (const auto c : mentioned) {
      const auto& alias = pick(specs[c].aliases, rng);
      words.push_back(unit(rng) < 0.5 ? alias : "$" + alias);
    }
    if (!off_topic) {
      const double s = sentiment[mentioned.empty() ? specs.size() : mentioned.front()][hour];
      const double p_bull = 1.0 / (1.0 + std::exp(-1.5 * s));
      const double u = unit(rng);
      if (u < p_bull) words.push_back(pick(kBullish, rng));
      else if (u < p_bull + 0.7 * (1.0 - p_bull)) words.push_back(pick(kBearish, rng));
    }
    for (int f = std::uniform_int_distribution<int>(1, 4)(rng); f > 0; --f) words.push_back(pick(kFiller, rng));
    std::shuffle(words.begin() + 1, words.end(), rng);
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + (unit(rng) < 0.1 ? std::string(1, static_cast<char>(std::toupper(w[0]))) + w.substr(1) : w);

    nlohmann::json t{{"id", fmt::format("t{:05}", n)},
                     {"author_id", authors[author]},
                     {"author_class", author < kInfluencers ? "influencer" : "news"},
                     {"created_at", coinpulse::format_rfc3339(at)},
                     {"followers", followers[author]}};
    if (unit(rng) < 0.2) {
      const auto target = rt_pick(rng);
      if (target != author) {
        t["retweeted_author_id"] = authors[target];
        text = "RT @" + authors[target] + ": " + text;
      }
    }
    t["text"] = text;
    if (unit(rng) < 0.9) t["engagement"] = std::floor(std::exp(3.0 + 1.5 * normal(rng)));
    jsonl += t.dump() + "\n";

    // A handful of malformed records exercise the rejection report.
    if (n == 1200) jsonl += "{\"id\": \"bad1\", \"author_id\": \"inf001\"\n";
    if (n == 3400) jsonl += "{\"id\": \"bad2\", \"author_id\": \"inf002\", \"author_class\": \"influencer\", \"text\": \"no time\"}\n";
    if (n == 5600) jsonl += "{\"id\": \"bad3\", \"author_id\": \"inf003\", \"author_class\": \"bot\", \"created_at\": \"2022-02-01T00:00:00Z\", \"text\": \"btc\"}\n";
    if (n == 7800) jsonl += t.dump() + "\n";
  }
  write_file(dir / "tweets.jsonl", jsonl);

  {
    const auto end = start + Hours{static_cast<std::int64_t>(kHours)};
    std::string profiles;
    for (std::size_t i = 0; i < kInfluencers; ++i) {
      nlohmann::json p{{"id", authors[i]}};
      if (i % 37 != 5) p["followers"] = followers[i];
      const auto idle_days = static_cast<std::int64_t>(std::exp(1.5 + 1.5 * normal(rng)));
      p["last_tweet_at"] = coinpulse::format_rfc3339(end - std::chrono::days{idle_days});
      std::vector<double> engagements;
      for (int k = 0; k < 12; ++k) engagements.push_back(std::floor(std::exp(5.0 + 1.2 * normal(rng))));
      p["recent_engagements"] = engagements;
      p["bio"] = i % 9 == 4 ? "food blogger and runner" : fmt::format("{} trader, {} analysis", pick(kRelevance, rng),
                                                                      specs[coin_pick(rng)].aliases.front());
      profiles += p.dump() + "\n";
    }
    write_file(dir / "profiles.jsonl", profiles);
  }

  write_file(dir / "watchlist.txt",
             "# accounts flagged by an external social-analytics ranking\ninf140\ninf141\nnews03\nextern_alpha\n");

  write_file(dir / "config.toml", R"([inputs]
tweets = "tweets.jsonl"
prices = "prices.csv"
registry = "registry.json"
lexicon = "lexicon.toml"
profiles = "profiles.jsonl"
candidate_lists = ["watchlist.txt"]

[classifier]
kind = "lexicon"

[signals]
population = "pooled"

[network]
filter_rule = "degree_share"
degree_share = 0.01
edge_share = 0.01
top_k = 20

[econometrics]
granger_max_lag = 24
xcorr_hourly_max = 24
xcorr_daily_max = 7
bands = [0.01, 0.05, 0.1]

[run]
out = "out"
seed = 7
)");
  std::printf("fixture written to %s\n", dir.string().c_str());
  return 0;
}
