#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "coinpulse/cli/config.hpp"
#include "coinpulse/cli/pipeline.hpp"
#include "coinpulse/signals/social_signal.hpp"

namespace {

struct GlobalFlags {
  std::string config = "coinpulse.toml";
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> population;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace coinpulse;

  CLI::App app{"coinpulse: tweet signals, Granger causality, cross-correlation and co-mention networks"};
  app.set_version_flag("--version", std::string(COINPULSE_VERSION));
  app.require_subcommand(1, 1);

  GlobalFlags flags;
  app.add_option("--config", flags.config, "Pipeline config file (TOML)");
  app.add_option("--out", flags.out, "Output directory (overrides run.out)");
  app.add_option("--workers", flags.workers, "Worker threads for parallel kernels (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", flags.seed, "Random seed (overrides run.seed)");
  app.add_option("--population", flags.population, "Signal population")
      ->check(CLI::IsMember({"pooled", "influencers", "news"}));

  const std::pair<const char*, const char*> commands[] = {
      {"ingest", "Load tweets, prices and the coin registry; detect mentions"},
      {"classify", "Label tweets as buy / not-buy"},
      {"signals", "Aggregate trailing 24h signal counts and social signals"},
      {"network", "Build co-mention and retweet networks; rank influencer candidates"},
      {"granger", "Granger tests of signal returns on price returns, lags 1..max"},
      {"xcorr", "Lagged cross-correlation of price and signal series"},
      {"matrix", "Hourly/weekly return correlation matrix of network coins"},
      {"report", "Corpus summary and significance table"},
      {"all", "Run every stage"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigExitCode;
  }

  const auto command = parse_command(app.get_subcommands().front()->get_name());

  PipelineConfig config;
  try {
    config = load_config(flags.config);
    if (flags.out) config.out_dir = std::filesystem::absolute(*flags.out).string();
    if (flags.workers) config.workers = *flags.workers;
    if (flags.seed) config.seed = *flags.seed;
    if (flags.population) config.population = parse_population(*flags.population);
    validate_config(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigExitCode;
  }

  try {
    const auto manifest = run_pipeline(config, *command);
    for (const auto& w : manifest["warnings"]) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
    std::printf("%s\n", fmt::format("{}: ok ({} outputs in {})", to_string(*command), manifest["outputs"].size(),
                                    config.resolve(config.out_dir).string())
                            .c_str());
  } catch (const StageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.stage());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
