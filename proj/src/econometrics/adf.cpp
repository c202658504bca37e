#include "coinpulse/econometrics/adf.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "coinpulse/econometrics/ols.hpp"
#include "coinpulse/error.hpp"

namespace coinpulse {

namespace {

// Rows: dv[t] for t in [first, dv.size()); regressors 1, v[t], dv[t-1..t-lags].
OlsFit adf_regression(std::span<const double> v, const std::vector<double>& dv, std::size_t lags, std::size_t first) {
  const auto rows = static_cast<Eigen::Index>(dv.size() - first);
  const auto cols = static_cast<Eigen::Index>(lags + 2);
  Eigen::MatrixXd x(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t t = first + static_cast<std::size_t>(r);
    y(r) = dv[t];
    x(r, 0) = 1.0;
    x(r, 1) = v[t];
    for (std::size_t j = 1; j <= lags; ++j) x(r, static_cast<Eigen::Index>(j + 1)) = dv[t - j];
  }
  return ols_fit(y, x);
}

}  // namespace

std::size_t adf_default_max_lag(std::size_t n) {
  return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

AdfCriticalValues adf_critical_values(std::size_t n_obs) {
  const double t = static_cast<double>(n_obs);
  const auto surface = [t](double b0, double b1, double b2, double b3) {
    return b0 + b1 / t + b2 / (t * t) + b3 / (t * t * t);
  };
  return {surface(-3.43035, -6.5393, -16.786, -79.433), surface(-2.86154, -2.8903, -4.234, -40.040),
          surface(-2.56677, -1.5384, -2.809, 0.0)};
}

AdfResult adf_test(std::span<const double> series, std::optional<std::size_t> max_lag) {
  const std::size_t n = series.size();
  if (n < kAdfMinLength) throw InputError(fmt::format("adf_test: need at least {} values, got {}", kAdfMinLength, n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(series[i])) throw InputError(fmt::format("adf_test: non-finite value at index {}", i));
  }
  bool constant = true;
  for (std::size_t i = 1; i < n && constant; ++i) constant = series[i] == series[0];
  if (constant) throw NumericError("zero variance");

  const std::size_t lag_cap = max_lag.value_or(adf_default_max_lag(n));
  std::vector<double> dv(n - 1);
  for (std::size_t i = 1; i < n; ++i) dv[i - 1] = series[i] - series[i - 1];

  // Common sample for the information criterion needs at least one residual
  // degree of freedom at the largest lag.
  if (dv.size() <= 2 * lag_cap + 2) {
    throw InputError(fmt::format("adf_test: series of length {} too short for max_lag {}", n, lag_cap));
  }

  std::size_t best_lag = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p <= lag_cap; ++p) {
    const OlsFit fit = adf_regression(series, dv, p, lag_cap);
    const double nobs = static_cast<double>(fit.n_obs);
    const double aic = nobs * std::log(fit.ssr / nobs) + 2.0 * static_cast<double>(p + 2);
    if (aic < best_aic) {
      best_aic = aic;
      best_lag = p;
    }
  }

  const OlsFit fit = adf_regression(series, dv, best_lag, best_lag);
  AdfResult out;
  out.statistic = fit.coefficients(1) / fit.standard_errors(1);
  out.chosen_lag = best_lag;
  out.max_lag = lag_cap;
  out.n_obs = fit.n_obs;
  out.critical = adf_critical_values(fit.n_obs);
  out.reject_1 = out.statistic < out.critical.one;
  out.reject_5 = out.statistic < out.critical.five;
  out.reject_10 = out.statistic < out.critical.ten;
  return out;
}

}  // namespace coinpulse
