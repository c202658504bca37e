#include "coinpulse/corpus/corpus.hpp"

#include <algorithm>

#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"

namespace coinpulse {

Corpus index_corpus(std::vector<Tweet> tweets, const CoinRegistry& registry) {
  Corpus c;
  c.tweets = std::move(tweets);
  c.mentions.resize(c.tweets.size());
  parallel_for(c.tweets.size(), [&](std::size_t i) { c.mentions[i] = registry.detect_mentions(c.tweets[i].text); });
  return c;
}

BucketSeries count_by_bucket(std::span<const Tweet> tweets, Resolution resolution) {
  BucketSeries out;
  out.resolution = resolution;
  if (tweets.empty()) return out;
  const auto earliest = std::min_element(tweets.begin(), tweets.end(), [](const Tweet& a, const Tweet& b) {
                          return a.created_at < b.created_at;
                        })->created_at;
  out.origin = bucket_floor(earliest, resolution);
  for (const auto& t : tweets) {
    const auto idx = static_cast<std::size_t>(bucket_index(out.origin, resolution, t.created_at));
    if (idx >= out.values.size()) out.values.resize(idx + 1, 0.0);
    out.values[idx] += 1.0;
  }
  return out;
}

std::vector<MentionGroupStats> mention_statistics(const Corpus& corpus, std::span<const std::string> group_of,
                                                  std::span<const std::string> groups) {
  if (corpus.size() == 0) throw InputError("mention_statistics: empty corpus");
  if (group_of.size() != corpus.size()) throw InputError("mention_statistics: group keys not aligned with corpus");
  std::vector<MentionGroupStats> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& g : groups) {
    if (slot.emplace(g, out.size()).second) out.push_back({g, 0, 0, std::nullopt, {}});
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& key = group_of[i];
    if (key.empty()) continue;
    auto [it, inserted] = slot.emplace(key, out.size());
    if (inserted) out.push_back({key, 0, 0, std::nullopt, {}});
    auto& g = out[it->second];
    const auto m = corpus.mentions[i].size();
    ++g.tweets;
    g.mentions += m;
    ++g.histogram[m];
  }
  for (auto& g : out) {
    if (g.tweets > 0) g.mean = static_cast<double>(g.mentions) / static_cast<double>(g.tweets);
  }
  return out;
}

std::vector<MentionGroupStats> mention_statistics_by_author(const Corpus& corpus) {
  std::vector<std::string> keys;
  keys.reserve(corpus.size());
  for (const auto& t : corpus.tweets) keys.emplace_back(to_string(t.author_class));
  const std::vector<std::string> groups{"influencer", "news"};
  return mention_statistics(corpus, keys, groups);
}

}  // namespace coinpulse
