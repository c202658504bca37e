#include "coinpulse/econometrics/xcorr.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "coinpulse/econometrics/special.hpp"
#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"

namespace coinpulse {

std::string_view to_string(MeanMode m) { return m == MeanMode::overlap ? "overlap" : "global"; }

MeanMode parse_mean_mode(std::string_view text) {
  if (text == "overlap") return MeanMode::overlap;
  if (text == "global") return MeanMode::global;
  throw InputError(fmt::format("unknown mean mode '{}' (expected overlap|global)", text));
}

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (const double a : v) s += a;
  return s / static_cast<double>(v.size());
}

}  // namespace

double cross_correlation(std::span<const double> x, std::span<const double> y, std::size_t k, MeanMode mode) {
  if (x.size() != y.size()) throw InputError(fmt::format("cross_correlation: length mismatch ({} vs {})", x.size(), y.size()));
  if (x.size() < k + 3) {
    throw InputError(fmt::format("cross_correlation: lag {} leaves fewer than 3 overlapping points (n={})", k, x.size()));
  }
  const std::size_t overlap = x.size() - k;
  const auto xs = x.subspan(k, overlap);
  const auto ys = y.subspan(0, overlap);
  if (mode == MeanMode::overlap) return pearson(xs, ys);

  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < overlap; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw NumericError("zero variance");
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

namespace {

LagCorrelation scan_one(std::span<const double> x, std::span<const double> y, std::size_t k, MeanMode mode) {
  LagCorrelation out;
  out.lag = k;
  try {
    out.gamma = cross_correlation(x, y, k, mode);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<LagCorrelation> cross_correlation_scan(std::span<const double> x, std::span<const double> y,
                                                   std::size_t max_lag, MeanMode mode) {
  std::vector<LagCorrelation> out(max_lag + 1);
  parallel_for(max_lag + 1, [&](std::size_t k) { out[k] = scan_one(x, y, k, mode); });
  return out;
}

namespace serial {

std::vector<LagCorrelation> cross_correlation_scan(std::span<const double> x, std::span<const double> y,
                                                   std::size_t max_lag, MeanMode mode) {
  std::vector<LagCorrelation> out;
  out.reserve(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) out.push_back(scan_one(x, y, k, mode));
  return out;
}

}  // namespace serial

std::optional<std::size_t> best_lag_index(const std::vector<LagCorrelation>& scan) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (!scan[i].gamma) continue;
    if (!best || std::fabs(*scan[i].gamma) > std::fabs(*scan[*best].gamma)) best = i;
  }
  return best;
}

BestLagResult best_lag_scan(std::span<const double> price_hourly, std::span<const double> signal_hourly,
                            std::span<const double> price_daily, std::span<const double> signal_daily,
                            std::size_t hourly_max, std::size_t daily_max, MeanMode mode) {
  BestLagResult out;
  out.hourly = cross_correlation_scan(price_hourly, signal_hourly, hourly_max, mode);
  out.daily = cross_correlation_scan(price_daily, signal_daily, daily_max, mode);
  const auto consider = [&](const std::vector<LagCorrelation>& scan, Resolution res) {
    for (const auto& row : scan) {
      if (!row.gamma) continue;
      if (!out.best || std::fabs(*row.gamma) > std::fabs(out.best->gamma)) out.best = LagChoice{*row.gamma, row.lag, res};
    }
  };
  consider(out.hourly, Resolution::hourly);
  consider(out.daily, Resolution::daily);
  return out;
}

}  // namespace coinpulse
