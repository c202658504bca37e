#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coinpulse/corpus/time.hpp"

namespace coinpulse {

/// Which means are subtracted in the lagged correlation. `overlap` uses the
/// means of the two overlapping windows (|gamma| <= 1 always); `global` uses
/// the means of the full series.
enum class MeanMode { overlap, global };
std::string_view to_string(MeanMode m);
MeanMode parse_mean_mode(std::string_view text);

/// gamma(k) = sum_i (x_{i+k} - xbar)(y_i - ybar) / (sqrt(sum (x_{i+k} - xbar)^2) sqrt(sum (y_i - ybar)^2))
/// over i = 0..n-k-1. Positive k pairs y at time i with x at i + k, i.e. y
/// leads x by k steps. Throws InputError for unequal lengths or n - k < 3 and
/// NumericError("zero variance") for a constant overlap segment.
/// With k = 0 and MeanMode::overlap this is exactly pearson(x, y).
double cross_correlation(std::span<const double> x, std::span<const double> y, std::size_t k,
                         MeanMode mode = MeanMode::overlap);

struct LagCorrelation {
  std::size_t lag = 0;
  std::optional<double> gamma;
  std::string error;
};

/// gamma(k) for k = 0..max_lag. Parallel over lags.
std::vector<LagCorrelation> cross_correlation_scan(std::span<const double> x, std::span<const double> y,
                                                   std::size_t max_lag, MeanMode mode = MeanMode::overlap);

namespace serial {
std::vector<LagCorrelation> cross_correlation_scan(std::span<const double> x, std::span<const double> y,
                                                   std::size_t max_lag, MeanMode mode = MeanMode::overlap);
}  // namespace serial

struct LagChoice {
  double gamma = 0.0;
  std::size_t lag = 0;
  Resolution resolution = Resolution::hourly;
};

struct BestLagResult {
  std::vector<LagCorrelation> hourly;
  std::vector<LagCorrelation> daily;
  /// Largest |gamma| over both scans; ties go to hourly, then to the smaller
  /// lag. Empty when every lag failed.
  std::optional<LagChoice> best;
};

/// Lagged correlation of a price series against a signal series at hourly
/// lags 0..hourly_max and daily lags 0..daily_max, with the signal as the
/// leading series (signal at t - lag against price at t).
BestLagResult best_lag_scan(std::span<const double> price_hourly, std::span<const double> signal_hourly,
                            std::span<const double> price_daily, std::span<const double> signal_daily,
                            std::size_t hourly_max, std::size_t daily_max, MeanMode mode = MeanMode::overlap);

/// Index of the largest |gamma| (smallest lag on ties); nullopt if none valid.
std::optional<std::size_t> best_lag_index(const std::vector<LagCorrelation>& scan);

}  // namespace coinpulse
