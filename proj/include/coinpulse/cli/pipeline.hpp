#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "coinpulse/cli/config.hpp"
#include "coinpulse/error.hpp"

namespace coinpulse {

enum class Command { ingest, classify, signals, network, granger, xcorr, matrix, report, all };
std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view text);

/// Pipeline stages in execution order. granger, xcorr and matrix together
/// form the econometrics stage and share its exit code.
enum class Stage { ingest, classify, aggregate, network, granger, xcorr, matrix, report };
std::string_view to_string(Stage s);

inline constexpr int kConfigExitCode = 2;
int exit_code(Stage s);

class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& message);
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

/// Runs the stages `command` needs, writing outputs and manifest.json into
/// config.out_dir. Stale outputs of the planned stages are removed first; on
/// failure the outputs of completed stages stay in place, a manifest with
/// status "failed" is written, and StageError is thrown.
/// Returns the manifest.
nlohmann::json run_pipeline(const PipelineConfig& config, Command command);

/// Manifest with wall-clock fields removed; two runs over identical inputs
/// compare equal under this view.
nlohmann::json manifest_without_timings(nlohmann::json manifest);

}  // namespace coinpulse
