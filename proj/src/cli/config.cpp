#include "coinpulse/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <set>

#include <fmt/format.h>

#include "coinpulse/toml_lite.hpp"

namespace coinpulse {

ConfigError::ConfigError(std::string field, const std::string& message)
    : InputError(fmt::format("config: {}: {}", field, message)), field_(std::move(field)) {}

std::string_view to_string(NetworkFilterRule r) { return r == NetworkFilterRule::degree_share ? "degree_share" : "kcore"; }

std::filesystem::path PipelineConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "inputs.tweets",          "inputs.prices",           "inputs.registry",
      "inputs.lexicon",         "inputs.profiles",         "inputs.candidate_lists",
      "classifier.kind",        "classifier.endpoint",     "classifier.batch_size",
      "classifier.timeout_seconds", "classifier.retries",  "classifier.backoff_ms",
      "signals.coins",          "signals.population",      "network.filter_rule",
      "network.degree_share",   "network.kcore_k",         "network.edge_share",
      "network.top_k",          "network.damping",         "network.binarize",
      "network.path_length",    "influencers.min_followers", "influencers.min_avg_engagement",
      "influencers.activity_window_days", "influencers.engagement_sample", "influencers.as_of",
      "econometrics.granger_max_lag", "econometrics.xcorr_hourly_max", "econometrics.xcorr_daily_max",
      "econometrics.bands",     "econometrics.matrix_exclude", "econometrics.adf_override",
      "econometrics.mean_mode", "run.out",                 "run.workers",
      "run.seed"};
  return keys;
}

template <typename T>
void take(std::optional<T> value, T& target) {
  if (value) target = std::move(*value);
}

std::size_t non_negative(const TomlDocument& doc, const std::string& key, std::size_t fallback) {
  const auto v = doc.get_int(key);
  if (!v) return fallback;
  if (*v < 0) throw ConfigError(key, "must be non-negative");
  return static_cast<std::size_t>(*v);
}

// Wraps accessor type errors into field-level ConfigErrors.
template <typename Fn>
void field(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  TomlDocument doc;
  try {
    doc = TomlDocument::parse(toml_text);
  } catch (const InputError& e) {
    throw ConfigError("<document>", e.what());
  }
  for (const auto& [key, value] : doc.values()) {
    if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
  }

  PipelineConfig c;
  c.base_dir = base_dir;
  field("inputs.tweets", [&] { take(doc.get_string("inputs.tweets"), c.tweets); });
  field("inputs.prices", [&] { take(doc.get_string("inputs.prices"), c.prices); });
  field("inputs.registry", [&] { take(doc.get_string("inputs.registry"), c.registry); });
  field("inputs.lexicon", [&] { take(doc.get_string("inputs.lexicon"), c.lexicon); });
  field("inputs.profiles", [&] { take(doc.get_string("inputs.profiles"), c.profiles); });
  field("inputs.candidate_lists", [&] { take(doc.get_string_array("inputs.candidate_lists"), c.candidate_lists); });

  field("classifier.kind", [&] {
    if (const auto kind = doc.get_string("classifier.kind")) {
      if (*kind == "lexicon") c.classifier = ClassifierKind::lexicon;
      else if (*kind == "external") c.classifier = ClassifierKind::external;
      else throw ConfigError("classifier.kind", fmt::format("expected lexicon|external, got '{}'", *kind));
    }
  });
  field("classifier.endpoint", [&] { take(doc.get_string("classifier.endpoint"), c.external.endpoint); });
  field("classifier.batch_size", [&] { c.external.batch_size = non_negative(doc, "classifier.batch_size", c.external.batch_size); });
  field("classifier.timeout_seconds", [&] { take(doc.get_double("classifier.timeout_seconds"), c.external.timeout_seconds); });
  field("classifier.retries", [&] { c.external.retries = static_cast<int>(non_negative(doc, "classifier.retries", 3)); });
  field("classifier.backoff_ms", [&] {
    c.external.backoff_base = std::chrono::milliseconds{
        static_cast<std::int64_t>(non_negative(doc, "classifier.backoff_ms", static_cast<std::size_t>(c.external.backoff_base.count())))};
  });

  field("signals.coins", [&] { take(doc.get_string_array("signals.coins"), c.signal_coins); });
  field("signals.population", [&] {
    if (const auto p = doc.get_string("signals.population")) c.population = parse_population(*p);
  });

  field("network.filter_rule", [&] {
    if (const auto r = doc.get_string("network.filter_rule")) {
      if (*r == "degree_share") c.filter_rule = NetworkFilterRule::degree_share;
      else if (*r == "kcore") c.filter_rule = NetworkFilterRule::kcore;
      else throw ConfigError("network.filter_rule", fmt::format("expected degree_share|kcore, got '{}'", *r));
    }
  });
  field("network.degree_share", [&] { take(doc.get_double("network.degree_share"), c.degree_share); });
  field("network.kcore_k", [&] { c.kcore_k = non_negative(doc, "network.kcore_k", c.kcore_k); });
  field("network.edge_share", [&] { take(doc.get_double("network.edge_share"), c.edge_share); });
  field("network.top_k", [&] { c.top_k = non_negative(doc, "network.top_k", c.top_k); });
  field("network.damping", [&] { take(doc.get_double("network.damping"), c.centrality.damping); });
  field("network.binarize", [&] { take(doc.get_bool("network.binarize"), c.centrality.binarize); });
  field("network.path_length", [&] {
    if (const auto p = doc.get_string("network.path_length")) c.centrality.path_length = parse_path_length(*p);
  });

  field("influencers.min_followers", [&] { take(doc.get_int("influencers.min_followers"), c.influencers.min_followers); });
  field("influencers.min_avg_engagement",
        [&] { take(doc.get_double("influencers.min_avg_engagement"), c.influencers.min_avg_engagement); });
  field("influencers.activity_window_days",
        [&] { take(doc.get_int("influencers.activity_window_days"), c.influencers.activity_window_days); });
  field("influencers.engagement_sample", [&] {
    c.influencers.engagement_sample = non_negative(doc, "influencers.engagement_sample", c.influencers.engagement_sample);
  });
  field("influencers.as_of", [&] {
    if (const auto t = doc.get_string("influencers.as_of")) c.as_of = parse_rfc3339(*t);
  });

  field("econometrics.granger_max_lag", [&] { c.granger_max_lag = non_negative(doc, "econometrics.granger_max_lag", c.granger_max_lag); });
  field("econometrics.xcorr_hourly_max", [&] { c.xcorr_hourly_max = non_negative(doc, "econometrics.xcorr_hourly_max", c.xcorr_hourly_max); });
  field("econometrics.xcorr_daily_max", [&] { c.xcorr_daily_max = non_negative(doc, "econometrics.xcorr_daily_max", c.xcorr_daily_max); });
  field("econometrics.bands", [&] { take(doc.get_double_array("econometrics.bands"), c.bands); });
  field("econometrics.matrix_exclude", [&] { take(doc.get_string_array("econometrics.matrix_exclude"), c.matrix_exclude); });
  field("econometrics.adf_override", [&] { take(doc.get_bool("econometrics.adf_override"), c.adf_override); });
  field("econometrics.mean_mode", [&] {
    if (const auto m = doc.get_string("econometrics.mean_mode")) c.mean_mode = parse_mean_mode(*m);
  });

  field("run.out", [&] { take(doc.get_string("run.out"), c.out_dir); });
  field("run.workers", [&] { c.workers = static_cast<int>(non_negative(doc, "run.workers", 0)); });
  field("run.seed", [&] { c.seed = non_negative(doc, "run.seed", 0); });

  if (const char* token = std::getenv(kClassifierTokenEnv)) c.external.token = token;
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  TomlDocument doc;
  std::string text;
  {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", fmt::format("cannot read config '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_config(text, base);
}

void validate_config(const PipelineConfig& c) {
  if (c.tweets.empty()) throw ConfigError("inputs.tweets", "required");
  if (c.prices.empty()) throw ConfigError("inputs.prices", "required");
  if (c.registry.empty()) throw ConfigError("inputs.registry", "required");
  if (c.classifier == ClassifierKind::lexicon && c.lexicon.empty()) {
    throw ConfigError("inputs.lexicon", "required for the lexicon classifier");
  }
  if (c.classifier == ClassifierKind::external && c.external.endpoint.empty()) {
    throw ConfigError("classifier.endpoint", "required for the external classifier");
  }
  if (c.external.batch_size == 0) throw ConfigError("classifier.batch_size", "must be >= 1");
  if (!(c.external.timeout_seconds > 0.0)) throw ConfigError("classifier.timeout_seconds", "must be positive");
  if (c.bands.empty()) throw ConfigError("econometrics.bands", "must not be empty");
  for (std::size_t i = 0; i < c.bands.size(); ++i) {
    if (!(c.bands[i] > 0.0 && c.bands[i] < 1.0)) throw ConfigError("econometrics.bands", "values must lie in (0, 1)");
    if (i > 0 && !(c.bands[i] > c.bands[i - 1])) throw ConfigError("econometrics.bands", "must be strictly increasing");
  }
  if (c.granger_max_lag < 1) throw ConfigError("econometrics.granger_max_lag", "must be >= 1");
  if (c.xcorr_hourly_max < 1) throw ConfigError("econometrics.xcorr_hourly_max", "must be >= 1");
  if (c.xcorr_daily_max < 1) throw ConfigError("econometrics.xcorr_daily_max", "must be >= 1");
  if (!(c.degree_share > 0.0 && c.degree_share < 1.0)) throw ConfigError("network.degree_share", "must lie in (0, 1)");
  if (!(c.edge_share > 0.0 && c.edge_share < 1.0)) throw ConfigError("network.edge_share", "must lie in (0, 1)");
  if (c.top_k < 1) throw ConfigError("network.top_k", "must be >= 1");
  if (!(c.centrality.damping > 0.0 && c.centrality.damping < 1.0)) throw ConfigError("network.damping", "must lie in (0, 1)");
  if (c.influencers.min_followers < 0) throw ConfigError("influencers.min_followers", "must be non-negative");
  if (c.influencers.min_avg_engagement < 0.0) throw ConfigError("influencers.min_avg_engagement", "must be non-negative");
  if (c.influencers.activity_window_days < 0) throw ConfigError("influencers.activity_window_days", "must be non-negative");
  if (c.influencers.engagement_sample < 1) throw ConfigError("influencers.engagement_sample", "must be >= 1");
  if (c.out_dir.empty()) throw ConfigError("run.out", "must not be empty");
}

nlohmann::json config_snapshot(const PipelineConfig& c) {
  nlohmann::json j;
  j["inputs"] = {{"tweets", c.tweets},   {"prices", c.prices},     {"registry", c.registry},
                 {"lexicon", c.lexicon}, {"profiles", c.profiles}, {"candidate_lists", c.candidate_lists}};
  j["classifier"] = {{"kind", c.classifier == ClassifierKind::lexicon ? "lexicon" : "external"}};
  if (c.classifier == ClassifierKind::external) {
    j["classifier"]["endpoint"] = c.external.endpoint;
    j["classifier"]["batch_size"] = c.external.batch_size;
    j["classifier"]["timeout_seconds"] = c.external.timeout_seconds;
    j["classifier"]["retries"] = c.external.retries;
  }
  j["signals"] = {{"coins", c.signal_coins}, {"population", std::string(to_string(c.population))}};
  j["network"] = {{"filter_rule", std::string(to_string(c.filter_rule))},
                  {"degree_share", c.degree_share},
                  {"kcore_k", c.kcore_k},
                  {"edge_share", c.edge_share},
                  {"top_k", c.top_k},
                  {"damping", c.centrality.damping},
                  {"binarize", c.centrality.binarize},
                  {"path_length", std::string(to_string(c.centrality.path_length))}};
  j["influencers"] = {{"min_followers", c.influencers.min_followers},
                      {"min_avg_engagement", c.influencers.min_avg_engagement},
                      {"activity_window_days", c.influencers.activity_window_days},
                      {"engagement_sample", c.influencers.engagement_sample},
                      {"as_of", c.as_of ? nlohmann::json(format_rfc3339(*c.as_of)) : nlohmann::json(nullptr)}};
  j["econometrics"] = {{"granger_max_lag", c.granger_max_lag},
                       {"xcorr_hourly_max", c.xcorr_hourly_max},
                       {"xcorr_daily_max", c.xcorr_daily_max},
                       {"bands", c.bands},
                       {"matrix_exclude", c.matrix_exclude},
                       {"adf_override", c.adf_override},
                       {"mean_mode", std::string(to_string(c.mean_mode))}};
  j["run"] = {{"seed", c.seed}};
  return j;
}

}  // namespace coinpulse
