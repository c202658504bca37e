#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coinpulse {

/// One equation of a bivariate VAR(k): intercept, k own lags, k cross lags.
struct VarEquation {
  double intercept = 0.0;
  std::vector<double> own;
  std::vector<double> cross;
  double intercept_se = 0.0;
  std::vector<double> own_se;
  std::vector<double> cross_se;
  std::vector<double> residuals;
  double ssr = 0.0;
};

/// y_t = alpha + sum beta_i y_{t-i} + sum gamma_i x_{t-i} + eps_t   (equation_y)
/// x_t = delta + sum phi_i  x_{t-i} + sum psi_i   y_{t-i} + eta_t   (equation_x)
struct VarModel {
  std::size_t lag = 0;
  std::size_t n_obs = 0;
  VarEquation equation_y;
  VarEquation equation_x;
};

/// Smallest series length that leaves residual degrees of freedom: n - k > 2k + 2.
constexpr std::size_t var_min_length(std::size_t k) { return 3 * k + 3; }

/// Fits both equations by OLS on the same n - k rows. Throws InputError on
/// unequal lengths, k = 0, or n < var_min_length(k).
VarModel fit_var_pair(std::span<const double> x, std::span<const double> y, std::size_t k);

struct GrangerResult {
  std::string cause_id;
  std::string effect_id;
  std::size_t lag = 0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_obs = 0;
  /// The unrestricted model fits exactly; F is reported as +inf and p as 0.
  bool degenerate = false;
};

/// F-test of "cause does not Granger-cause effect" at lag k: the restricted
/// regression (intercept + k effect lags) against the unrestricted one (plus k
/// cause lags), both on the same n - k rows, with F ~ F(k, n - 3k - 1).
GrangerResult granger_test(std::span<const double> cause, std::span<const double> effect, std::size_t k);

/// One row of a lag scan. Exactly one of `result` / `error` is meaningful.
struct GrangerRow {
  std::size_t lag = 0;
  std::optional<GrangerResult> result;
  std::string error;
};

/// granger_test for k = 1..max_lag, sorted by k; per-lag failures become row
/// errors. Parallel over lags.
std::vector<GrangerRow> granger_scan(std::span<const double> cause, std::span<const double> effect,
                                     std::size_t max_lag);

namespace serial {
std::vector<GrangerRow> granger_scan(std::span<const double> cause, std::span<const double> effect,
                                     std::size_t max_lag);
}  // namespace serial

}  // namespace coinpulse
