#pragma once

#include <cstddef>
#include <span>

namespace coinpulse {

/// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), evaluated with a modified-Lentz
/// continued fraction (and the I_x(a,b) = 1 - I_{1-x}(b,a) reflection on the
/// slow side). Throws NumericError for a, b <= 0 or x outside [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// Upper-tail probability P(F > f) of the F(d1, d2) distribution. Returns 1
/// for f <= 0 and 0 for f = +inf. Throws NumericError for d1 or d2 < 1,
/// negative or NaN f.
double f_pvalue(double f, int d1, int d2);

/// Two-sided P(|T| > |t|) for Student's t with `df` degrees of freedom.
double t_pvalue_two_sided(double t, double df);

/// Pearson correlation of two equal-length vectors, clamped to [-1, 1].
/// Throws NumericError("zero variance") when either input is constant and
/// InputError on length mismatch or fewer than 2 points.
double pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of a Pearson r over n paired samples, via
/// t = r * sqrt((n - 2) / (1 - r^2)). |r| = 1 gives 0. Requires n >= 3.
double pearson_pvalue(double r, std::size_t n);

}  // namespace coinpulse
