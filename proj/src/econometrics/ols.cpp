#include "coinpulse/econometrics/ols.hpp"

#include <cmath>

#include <fmt/format.h>

namespace coinpulse {

CollinearError::CollinearError(Eigen::Index column)
    : NumericError(fmt::format("collinear regressors: column {} is a linear combination of earlier columns", column)),
      column_(column) {}

OlsFit ols_fit(const Eigen::VectorXd& response, const Eigen::MatrixXd& design) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (response.size() != n) {
    throw InputError(fmt::format("ols_fit: response has {} rows, design has {}", response.size(), n));
  }
  if (p == 0 || n <= p) throw InputError(fmt::format("ols_fit: need rows > cols, got {}x{}", n, p));

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::MatrixXd& packed = qr.matrixQR();
  constexpr double kRankTolerance = 1e-10;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double col_norm = design.col(j).norm();
    if (!(std::fabs(packed(j, j)) > kRankTolerance * col_norm)) throw CollinearError(j);
  }

  OlsFit fit;
  fit.n_obs = static_cast<std::size_t>(n);
  fit.coefficients = qr.solve(response);
  fit.residuals = response - design * fit.coefficients;
  fit.ssr = fit.residuals.squaredNorm();

  // cov(beta) = s^2 (R^T R)^{-1} = s^2 R^{-1} R^{-T}
  const Eigen::MatrixXd r = packed.topRows(p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const double s2 = fit.ssr / static_cast<double>(n - p);
  fit.standard_errors = (r_inv.rowwise().squaredNorm() * s2).cwiseSqrt();
  return fit;
}

}  // namespace coinpulse
