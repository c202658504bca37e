#include "coinpulse/netgraph/influencers.hpp"

#include <fstream>
#include <istream>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "coinpulse/error.hpp"

namespace coinpulse {

std::string_view to_string(InfluencerRejection r) {
  switch (r) {
    case InfluencerRejection::missing_data: return "missing data";
    case InfluencerRejection::followers: return "followers";
    case InfluencerRejection::inactivity: return "inactivity";
    case InfluencerRejection::engagement: return "engagement";
    case InfluencerRejection::description: return "description";
  }
  return "missing data";
}

std::vector<InfluencerDecision> filter_influencers(std::span<const CandidateProfile> candidates,
                                                   const InfluencerCriteria& criteria, Timestamp as_of,
                                                   const DescriptionFilter& description_filter) {
  if (criteria.min_followers < 0 || criteria.min_avg_engagement < 0.0 || criteria.activity_window_days < 0 ||
      criteria.engagement_sample == 0) {
    throw InputError("influencer criteria must be non-negative (and sample size >= 1)");
  }
  const auto window = std::chrono::days{criteria.activity_window_days};
  std::vector<InfluencerDecision> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto reject = [&](InfluencerRejection r) { out.push_back({c.id, false, r}); };
    if (!c.followers || !c.last_tweet_at || !c.recent_engagements || c.recent_engagements->empty() || !c.bio) {
      reject(InfluencerRejection::missing_data);
      continue;
    }
    if (*c.followers < criteria.min_followers) {
      reject(InfluencerRejection::followers);
      continue;
    }
    if (as_of - *c.last_tweet_at > window) {
      reject(InfluencerRejection::inactivity);
      continue;
    }
    const auto& eng = *c.recent_engagements;
    const std::size_t take = std::min(criteria.engagement_sample, eng.size());
    const double mean = std::accumulate(eng.begin(), eng.begin() + static_cast<std::ptrdiff_t>(take), 0.0) /
                        static_cast<double>(take);
    if (mean < criteria.min_avg_engagement) {
      reject(InfluencerRejection::engagement);
      continue;
    }
    if (!description_filter(*c.bio)) {
      reject(InfluencerRejection::description);
      continue;
    }
    out.push_back({c.id, true, std::nullopt});
  }
  return out;
}

std::vector<CandidateProfile> parse_profiles(std::istream& in) {
  std::vector<CandidateProfile> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      CandidateProfile p;
      p.id = obj.at("id").get<std::string>();
      if (obj.contains("followers") && !obj["followers"].is_null()) p.followers = obj["followers"].get<std::int64_t>();
      if (obj.contains("last_tweet_at") && !obj["last_tweet_at"].is_null()) {
        p.last_tweet_at = parse_rfc3339(obj["last_tweet_at"].get<std::string>());
      }
      if (obj.contains("recent_engagements") && !obj["recent_engagements"].is_null()) {
        p.recent_engagements = obj["recent_engagements"].get<std::vector<double>>();
      }
      if (obj.contains("bio") && !obj["bio"].is_null()) p.bio = obj["bio"].get<std::string>();
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(fmt::format("profiles: line {}: {}", line_no, e.what()));
    } catch (const InputError& e) {
      throw InputError(fmt::format("profiles: line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

std::vector<CandidateProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read profiles file '{}'", path.string()));
  return parse_profiles(in);
}

}  // namespace coinpulse
