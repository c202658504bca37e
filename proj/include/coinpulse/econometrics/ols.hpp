#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "coinpulse/error.hpp"

namespace coinpulse {

struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  Eigen::VectorXd residuals;
  /// Sum of squared residuals.
  double ssr = 0.0;
  std::size_t n_obs = 0;

  std::size_t dof() const { return n_obs - static_cast<std::size_t>(coefficients.size()); }
};

/// Raised for a rank-deficient design; `column()` is the first column that is
/// (numerically) a linear combination of the columns before it.
class CollinearError : public NumericError {
 public:
  explicit CollinearError(Eigen::Index column);
  Eigen::Index column() const { return column_; }

 private:
  Eigen::Index column_;
};

/// Least squares via Householder QR. The caller supplies the intercept column
/// if one is wanted. Requires rows > cols.
OlsFit ols_fit(const Eigen::VectorXd& response, const Eigen::MatrixXd& design);

}  // namespace coinpulse
