#include "coinpulse/econometrics/correlation.hpp"

#include <map>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "coinpulse/econometrics/special.hpp"
#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"

namespace coinpulse {

namespace {

std::vector<const AlignedSeries*> select(const std::vector<AlignedSeries>& all, const std::vector<std::string>& order,
                                         Resolution res) {
  std::map<std::string, const AlignedSeries*> by_id;
  for (const auto& s : all) by_id[s.id] = &s;
  std::vector<const AlignedSeries*> out;
  for (const auto& coin : order) {
    const auto it = by_id.find(coin);
    if (it == by_id.end()) throw InputError(fmt::format("return_correlation_matrix: no {} series for {}", to_string(res), coin));
    out.push_back(it->second);
  }
  for (const auto* s : out) {
    const auto* ref = out.front();
    if (s->origin != ref->origin || s->values.size() != ref->values.size()) {
      throw InputError(fmt::format(
          "return_correlation_matrix: {} series for {} misaligned with {} (origin {} vs {}, length {} vs {})",
          to_string(res), s->id, ref->id, format_rfc3339(s->origin), format_rfc3339(ref->origin), s->values.size(),
          ref->values.size()));
    }
  }
  return out;
}

AdfCheck run_adf(const AlignedSeries& s, Resolution res) {
  AdfCheck check{s.id, res, std::nullopt, {}};
  try {
    check.result = adf_test(s.values);
  } catch (const Error& e) {
    check.error = e.what();
  }
  return check;
}

struct Prepared {
  std::vector<const AlignedSeries*> hourly;
  std::vector<const AlignedSeries*> weekly;
  ReturnCorrelationMatrix out;
};

Prepared prepare(const std::vector<AlignedSeries>& hourly, const std::vector<AlignedSeries>& weekly,
                 const std::vector<std::string>& order, bool adf_override) {
  if (order.empty()) throw InputError("return_correlation_matrix: empty coin order");
  Prepared p;
  p.hourly = select(hourly, order, Resolution::hourly);
  p.weekly = select(weekly, order, Resolution::weekly);
  auto& m = p.out;
  m.coins = order;
  m.adf_override = adf_override;
  m.hourly_n = p.hourly.front()->values.size();
  m.weekly_n = p.weekly.front()->values.size();
  const auto n = static_cast<Eigen::Index>(order.size());
  m.values = Eigen::MatrixXd::Identity(n, n);
  m.p_values = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::pair<const AlignedSeries*, Resolution>> tasks;
  for (std::size_t i = 0; i < order.size(); ++i) {
    tasks.emplace_back(p.hourly[i], Resolution::hourly);
    tasks.emplace_back(p.weekly[i], Resolution::weekly);
  }
  m.adf.resize(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) { m.adf[t] = run_adf(*tasks[t].first, tasks[t].second); });
  std::vector<std::string> failures;
  for (const auto& check : m.adf) {
    if (!check.stationary()) failures.push_back(fmt::format("{}/{}", check.coin, to_string(check.resolution)));
  }
  if (!failures.empty() && !adf_override) {
    throw NumericError(fmt::format("return_correlation_matrix: unit root not rejected at 5% for {}", fmt::join(failures, ", ")));
  }
  return p;
}

void fill_pair(Prepared& p, std::size_t i, std::size_t j) {
  // i > j: hourly (lower triangle); i < j: weekly (upper triangle).
  const auto& src = i > j ? p.hourly : p.weekly;
  const double r = pearson(src[i]->values, src[j]->values);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  p.out.values(ii, jj) = r;
  p.out.p_values(ii, jj) = pearson_pvalue(r, src[i]->values.size());
}

std::vector<std::pair<std::size_t, std::size_t>> off_diagonal(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) cells.emplace_back(i, j);
    }
  }
  return cells;
}

}  // namespace

ReturnCorrelationMatrix return_correlation_matrix(const std::vector<AlignedSeries>& hourly,
                                                  const std::vector<AlignedSeries>& weekly,
                                                  const std::vector<std::string>& order, bool adf_override) {
  Prepared p = prepare(hourly, weekly, order, adf_override);
  const auto cells = off_diagonal(order.size());
  parallel_for(cells.size(), [&](std::size_t c) { fill_pair(p, cells[c].first, cells[c].second); });
  return std::move(p.out);
}

namespace serial {

ReturnCorrelationMatrix return_correlation_matrix(const std::vector<AlignedSeries>& hourly,
                                                  const std::vector<AlignedSeries>& weekly,
                                                  const std::vector<std::string>& order, bool adf_override) {
  Prepared p = prepare(hourly, weekly, order, adf_override);
  for (const auto& [i, j] : off_diagonal(order.size())) fill_pair(p, i, j);
  return std::move(p.out);
}

}  // namespace serial

}  // namespace coinpulse
