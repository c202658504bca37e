#include "coinpulse/econometrics/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "coinpulse/econometrics/ols.hpp"
#include "coinpulse/econometrics/special.hpp"
#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"

namespace coinpulse {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b, std::size_t k) {
  if (a.size() != b.size()) throw InputError(fmt::format("series lengths differ ({} vs {})", a.size(), b.size()));
  if (k == 0) throw InputError("lag must be >= 1");
  if (a.size() < var_min_length(k)) {
    throw InputError(fmt::format("need at least {} observations for lag {}, got {}", var_min_length(k), k, a.size()));
  }
}

// Rows t = k..n-1; columns 1, own[t-1..t-k] and, if `cross` is non-empty,
// cross[t-1..t-k].
Eigen::MatrixXd lag_design(std::span<const double> own, std::span<const double> cross, std::size_t k) {
  const auto rows = static_cast<Eigen::Index>(own.size() - k);
  const auto cols = static_cast<Eigen::Index>(1 + k + (cross.empty() ? 0 : k));
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t t = k + static_cast<std::size_t>(r);
    x(r, 0) = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
      x(r, static_cast<Eigen::Index>(i)) = own[t - i];
      if (!cross.empty()) x(r, static_cast<Eigen::Index>(k + i)) = cross[t - i];
    }
  }
  return x;
}

Eigen::VectorXd lag_response(std::span<const double> s, std::size_t k) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(s.size() - k));
  for (Eigen::Index r = 0; r < y.size(); ++r) y(r) = s[k + static_cast<std::size_t>(r)];
  return y;
}

VarEquation fit_equation(std::span<const double> own, std::span<const double> cross, std::size_t k) {
  const OlsFit fit = ols_fit(lag_response(own, k), lag_design(own, cross, k));
  VarEquation eq;
  eq.intercept = fit.coefficients(0);
  eq.intercept_se = fit.standard_errors(0);
  for (std::size_t i = 1; i <= k; ++i) {
    eq.own.push_back(fit.coefficients(static_cast<Eigen::Index>(i)));
    eq.own_se.push_back(fit.standard_errors(static_cast<Eigen::Index>(i)));
    eq.cross.push_back(fit.coefficients(static_cast<Eigen::Index>(k + i)));
    eq.cross_se.push_back(fit.standard_errors(static_cast<Eigen::Index>(k + i)));
  }
  eq.residuals.assign(fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
  eq.ssr = fit.ssr;
  return eq;
}

// Relative SSR below which the unrestricted model counts as an exact fit.
constexpr double kPerfectFit = 1e-20;

}  // namespace

VarModel fit_var_pair(std::span<const double> x, std::span<const double> y, std::size_t k) {
  check_lengths(x, y, k);
  VarModel m;
  m.lag = k;
  m.n_obs = x.size() - k;
  m.equation_y = fit_equation(y, x, k);
  m.equation_x = fit_equation(x, y, k);
  return m;
}

GrangerResult granger_test(std::span<const double> cause, std::span<const double> effect, std::size_t k) {
  check_lengths(cause, effect, k);
  const Eigen::VectorXd y = lag_response(effect, k);
  const OlsFit unrestricted = ols_fit(y, lag_design(effect, cause, k));
  const OlsFit restricted = ols_fit(y, lag_design(effect, {}, k));

  GrangerResult out;
  out.lag = k;
  out.n_obs = y.size();
  const auto dof = static_cast<int>(out.n_obs - 2 * k - 1);
  const double tss = (y.array() - y.mean()).square().sum();
  if (unrestricted.ssr <= kPerfectFit * tss) {
    out.f_statistic = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
    out.degenerate = true;
    return out;
  }
  const double numerator = std::max(restricted.ssr - unrestricted.ssr, 0.0) / static_cast<double>(k);
  out.f_statistic = numerator / (unrestricted.ssr / static_cast<double>(dof));
  out.p_value = f_pvalue(out.f_statistic, static_cast<int>(k), dof);
  return out;
}

namespace {

GrangerRow scan_row(std::span<const double> cause, std::span<const double> effect, std::size_t k) {
  GrangerRow row;
  row.lag = k;
  try {
    row.result = granger_test(cause, effect, k);
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<GrangerRow> granger_scan(std::span<const double> cause, std::span<const double> effect,
                                     std::size_t max_lag) {
  std::vector<GrangerRow> rows(max_lag);
  parallel_for(max_lag, [&](std::size_t i) { rows[i] = scan_row(cause, effect, i + 1); });
  return rows;
}

namespace serial {

std::vector<GrangerRow> granger_scan(std::span<const double> cause, std::span<const double> effect,
                                     std::size_t max_lag) {
  std::vector<GrangerRow> rows;
  rows.reserve(max_lag);
  for (std::size_t k = 1; k <= max_lag; ++k) rows.push_back(scan_row(cause, effect, k));
  return rows;
}

}  // namespace serial

}  // namespace coinpulse
