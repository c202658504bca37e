#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coinpulse/corpus/time.hpp"
#include "coinpulse/econometrics/xcorr.hpp"
#include "coinpulse/error.hpp"
#include "coinpulse/netgraph/centrality.hpp"
#include "coinpulse/netgraph/influencers.hpp"
#include "coinpulse/signals/external.hpp"
#include "coinpulse/signals/social_signal.hpp"

namespace coinpulse {

/// Config value that violates the schema; `field()` is the dotted key.
class ConfigError : public InputError {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ClassifierKind { lexicon, external };
enum class NetworkFilterRule { degree_share, kcore };
std::string_view to_string(NetworkFilterRule r);

struct PipelineConfig {
  // [inputs]; relative paths are resolved against base_dir.
  std::string tweets;
  std::string prices;
  std::string registry;
  std::string lexicon;
  std::string profiles;
  std::vector<std::string> candidate_lists;

  // [classifier]
  ClassifierKind classifier = ClassifierKind::lexicon;
  ExternalClassifierConfig external;

  // [signals]
  /// Coins analysed against their prices; empty means every registry coin
  /// that has prices.
  std::vector<std::string> signal_coins;
  Population population = Population::pooled;

  // [network]
  NetworkFilterRule filter_rule = NetworkFilterRule::degree_share;
  double degree_share = 0.01;
  std::size_t kcore_k = 2;
  double edge_share = 0.01;
  std::size_t top_k = 1000;
  CentralityOptions centrality;

  // [influencers]
  InfluencerCriteria influencers;
  /// Reference time for the activity window; defaults to the latest tweet.
  std::optional<Timestamp> as_of;

  // [econometrics]
  std::size_t granger_max_lag = 24;
  std::size_t xcorr_hourly_max = 24;
  std::size_t xcorr_daily_max = 7;
  std::vector<double> bands{0.01, 0.05, 0.1};
  std::vector<std::string> matrix_exclude;
  bool adf_override = false;
  MeanMode mean_mode = MeanMode::overlap;

  // [run]
  std::string out_dir = "out";
  int workers = 0;
  std::uint64_t seed = 0;

  std::filesystem::path base_dir = ".";

  std::filesystem::path resolve(const std::string& path) const;
};

/// Parses a config document; unknown keys and type mismatches throw
/// ConfigError naming the field.
PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

/// Checks cross-field invariants (bands increasing in (0,1), lags >= 1,
/// required paths non-empty, thresholds in range).
void validate_config(const PipelineConfig& config);

/// Snapshot for the run manifest: every analysis-relevant setting, paths as
/// written. The output directory and worker count are left out because they
/// do not affect results.
nlohmann::json config_snapshot(const PipelineConfig& config);

}  // namespace coinpulse
