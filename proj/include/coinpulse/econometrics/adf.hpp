#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace coinpulse {

struct AdfCriticalValues {
  double one = 0.0;
  double five = 0.0;
  double ten = 0.0;
};

struct AdfResult {
  /// t-ratio of the lagged-level coefficient.
  double statistic = 0.0;
  std::size_t chosen_lag = 0;
  std::size_t max_lag = 0;
  /// Rows in the final regression.
  std::size_t n_obs = 0;
  AdfCriticalValues critical;
  bool reject_1 = false;
  bool reject_5 = false;
  bool reject_10 = false;
};

/// Minimum series length accepted by adf_test.
inline constexpr std::size_t kAdfMinLength = 25;

/// floor(12 * (n / 100)^(1/4))
std::size_t adf_default_max_lag(std::size_t n);

/// Constant-only (no trend) finite-sample critical values from MacKinnon's
/// 2010 response surfaces.
AdfCriticalValues adf_critical_values(std::size_t n_obs);

/// Augmented Dickey-Fuller test with a constant and no trend:
///   dv_t = c + rho * v_{t-1} + sum_{j=1..p} lambda_j dv_{t-j} + e_t
/// p is chosen by minimum AIC over 0..max_lag on a common sample, then the
/// chosen model is refit on all available rows. Rejecting the unit root means
/// the series looks stationary.
AdfResult adf_test(std::span<const double> series, std::optional<std::size_t> max_lag = std::nullopt);

}  // namespace coinpulse
