#include "coinpulse/econometrics/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "coinpulse/error.hpp"

namespace coinpulse {

namespace {

double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);  // std::lgamma writes the global signgam
#else
  return std::lgamma(x);
#endif
}

// Continued fraction for I_x(a, b) (Numerical Recipes betacf, modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw NumericError(fmt::format("incomplete beta: continued fraction did not converge (a={}, b={}, x={})", a, b, x));
}

// lgamma(z) minus its Stirling approximation (z - 1/2) ln z - z + ln(2 pi) / 2.
double stirling_remainder(double z) {
  if (z >= 10.0) {
    const double r = 1.0 / z;
    const double r2 = r * r;
    return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
  }
  return log_gamma(z) - ((z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi));
}

// ln( x^a (1 - x)^b / B(a, b) ). With both shapes large the naive form
// subtracts logs of size ~a + b; here the large parts cancel analytically and
// u = x (a + b) - a enters both power terms, so its rounding cancels to first
// order.
double log_beta_front(double a, double b, double x) {
  const double u = x * (a + b) - a;
  const double pa = std::fabs(u) < 0.5 * a ? a * std::log1p(u / a) : a * std::log(x * (a + b) / a);
  const double pb = std::fabs(u) < 0.5 * b ? b * std::log1p(-u / b) : b * std::log1p(-x) + b * std::log((a + b) / b);
  const double correction = stirling_remainder(a) + stirling_remainder(b) - stirling_remainder(a + b);
  return pa + pb + 0.5 * std::log(a * b / ((a + b) * 2.0 * std::numbers::pi)) - correction;
}

}  // namespace

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw NumericError(fmt::format("incomplete beta: invalid shape ({}, {})", a, b));
  if (!(x >= 0.0 && x <= 1.0)) throw NumericError(fmt::format("incomplete beta: x={} outside [0, 1]", x));
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = log_beta_front(a, b, x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_pvalue(double f, int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw NumericError(fmt::format("f_pvalue: invalid degrees of freedom ({}, {})", d1, d2));
  if (std::isnan(f) || f < 0.0) throw NumericError(fmt::format("f_pvalue: invalid statistic {}", f));
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double x = static_cast<double>(d2) / (static_cast<double>(d2) + static_cast<double>(d1) * f);
  return std::clamp(regularized_incomplete_beta(0.5 * d2, 0.5 * d1, x), 0.0, 1.0);
}

double t_pvalue_two_sided(double t, double df) {
  if (!(df > 0.0)) throw NumericError(fmt::format("t_pvalue: invalid degrees of freedom {}", df));
  if (std::isnan(t)) throw NumericError("t_pvalue: NaN statistic");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(regularized_incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError(fmt::format("pearson: length mismatch ({} vs {})", x.size(), y.size()));
  if (x.size() < 2) throw InputError("pearson: need at least 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw NumericError("zero variance");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

double pearson_pvalue(double r, std::size_t n) {
  if (n < 3) throw NumericError(fmt::format("pearson_pvalue: need n >= 3, got {}", n));
  if (std::isnan(r)) throw NumericError("pearson_pvalue: NaN correlation");
  if (std::fabs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  return t_pvalue_two_sided(t, df);
}

}  // namespace coinpulse
