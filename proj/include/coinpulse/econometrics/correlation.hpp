#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coinpulse/corpus/time.hpp"
#include "coinpulse/econometrics/adf.hpp"

namespace coinpulse {

/// A series on a regular grid starting at `origin`.
struct AlignedSeries {
  std::string id;
  Timestamp origin{};
  std::vector<double> values;
};

struct AdfCheck {
  std::string coin;
  Resolution resolution = Resolution::hourly;
  std::optional<AdfResult> result;
  /// Set when the test could not run (too short, constant, ...).
  std::string error;

  bool stationary() const { return result && result->reject_5; }
};

/// Lag-0 return correlations on two horizons in one matrix: below the diagonal
/// (i > j) from hourly returns, above it (i < j) from weekly-mean returns,
/// ones on the diagonal. p-values are two-sided Pearson t-tests.
struct ReturnCorrelationMatrix {
  std::vector<std::string> coins;
  Eigen::MatrixXd values;
  Eigen::MatrixXd p_values;
  std::size_t hourly_n = 0;
  std::size_t weekly_n = 0;
  std::vector<AdfCheck> adf;
  /// True when non-stationary series were accepted on the caller's request.
  bool adf_override = false;
};

/// Builds the dual-horizon matrix in `order`. Every coin needs an hourly and a
/// weekly series; within each horizon all series must share origin and length
/// (InputError naming the coin otherwise). Each series is ADF-tested; unless
/// `adf_override` is set, a series that does not reject a unit root at 5%
/// raises NumericError. Parallel over coin pairs.
ReturnCorrelationMatrix return_correlation_matrix(const std::vector<AlignedSeries>& hourly,
                                                  const std::vector<AlignedSeries>& weekly,
                                                  const std::vector<std::string>& order, bool adf_override = false);

namespace serial {
ReturnCorrelationMatrix return_correlation_matrix(const std::vector<AlignedSeries>& hourly,
                                                  const std::vector<AlignedSeries>& weekly,
                                                  const std::vector<std::string>& order, bool adf_override = false);
}  // namespace serial

}  // namespace coinpulse
