#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coinpulse/corpus/registry.hpp"
#include "coinpulse/labeled_matrix.hpp"
#include "coinpulse/netgraph/graph.hpp"

namespace coinpulse {

/// Cosine similarity of binary tag-indicator vectors for `coins` (in the given
/// order). Pairs involving an untagged coin are 0, including its diagonal.
/// Throws InputError for a coin missing from the registry.
LabeledMatrix tag_similarity_matrix(const CoinRegistry& registry, const std::vector<std::string>& coins);

/// Weighted adjacency in `order`; absent edges are 0, the diagonal is 0.
LabeledMatrix adjacency_matrix(const WeightedGraph& graph, const std::vector<std::string>& order);

struct MatrixCorrelation {
  double r = 0.0;
  double p_value = 1.0;
  /// Number of strict upper-triangle pairs used.
  std::size_t n_pairs = 0;
};

/// Pearson correlation between the strict upper triangles of two symmetric
/// matrices with the same label order. Throws InputError when sizes or labels
/// differ or size < 3, NumericError("degenerate matrix") when either triangle
/// is constant.
MatrixCorrelation matrix_pearson(const LabeledMatrix& a, const LabeledMatrix& b);

/// Same, on raw matrices (no label check); used for the mixed-triangle return
/// correlation matrix where only one triangle is meaningful.
MatrixCorrelation triangle_pearson(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool upper);

}  // namespace coinpulse
