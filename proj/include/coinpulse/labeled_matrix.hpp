#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coinpulse {

/// Square matrix whose rows and columns share one label order.
struct LabeledMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;

  std::size_t size() const { return labels.size(); }
};

}  // namespace coinpulse
