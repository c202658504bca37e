#include "coinpulse/netgraph/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "coinpulse/econometrics/special.hpp"
#include "coinpulse/error.hpp"

namespace coinpulse {

LabeledMatrix tag_similarity_matrix(const CoinRegistry& registry, const std::vector<std::string>& coins) {
  std::vector<std::set<std::string>> tags;
  for (const auto& id : coins) {
    const auto* entry = registry.find(id);
    if (entry == nullptr) throw InputError(fmt::format("tag_similarity_matrix: unknown coin '{}'", id));
    tags.emplace_back(entry->tags.begin(), entry->tags.end());
  }
  const auto n = static_cast<Eigen::Index>(coins.size());
  LabeledMatrix m{coins, Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& a = tags[static_cast<std::size_t>(i)];
      const auto& b = tags[static_cast<std::size_t>(j)];
      if (a.empty() || b.empty()) continue;
      std::size_t shared = 0;
      for (const auto& t : a) shared += b.count(t);
      const double sim = i == j ? 1.0
                                : static_cast<double>(shared) /
                                      (std::sqrt(static_cast<double>(a.size())) * std::sqrt(static_cast<double>(b.size())));
      m.values(i, j) = sim;
      m.values(j, i) = sim;
    }
  }
  return m;
}

LabeledMatrix adjacency_matrix(const WeightedGraph& graph, const std::vector<std::string>& order) {
  const auto n = static_cast<Eigen::Index>(order.size());
  LabeledMatrix m{order, Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) m.values(i, j) = graph.weight(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

MatrixCorrelation triangle_pearson(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool upper) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw InputError("matrix correlation: matrices must be square and of equal size");
  }
  if (a.rows() < 3) throw InputError("matrix correlation: need at least 3x3 matrices");
  std::vector<double> xa;
  std::vector<double> xb;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      xa.push_back(upper ? a(i, j) : a(j, i));
      xb.push_back(upper ? b(i, j) : b(j, i));
    }
  }
  MatrixCorrelation out;
  out.n_pairs = xa.size();
  try {
    out.r = pearson(xa, xb);
  } catch (const NumericError&) {
    throw NumericError("degenerate matrix");
  }
  out.p_value = pearson_pvalue(out.r, out.n_pairs);
  return out;
}

MatrixCorrelation matrix_pearson(const LabeledMatrix& a, const LabeledMatrix& b) {
  if (a.labels != b.labels) throw InputError("matrix_pearson: label orders differ");
  for (const auto* m : {&a, &b}) {
    if (m->values.rows() == m->values.cols() && !m->values.isApprox(m->values.transpose(), 1e-12)) {
      throw InputError("matrix_pearson: matrix is not symmetric");
    }
  }
  return triangle_pearson(a.values, b.values, true);
}

}  // namespace coinpulse
