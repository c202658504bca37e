#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "coinpulse/corpus/time.hpp"

namespace coinpulse {

struct PricePoint {
  Timestamp at{};
  double price = 0.0;
};

/// Hourly prices for one coin. Timestamps are strictly increasing hour
/// boundaries; a step longer than one hour is a gap.
struct PriceSeries {
  std::string coin_id;
  std::vector<PricePoint> points;
};

/// Half-open range of missing hours [first, last + 1h).
struct HourGap {
  Timestamp first{};
  Timestamp last{};
};

/// Reads prices.csv (`timestamp,coin,price`). Throws InputError naming the
/// line on any malformed row, non-positive price, off-hour timestamp, or
/// non-increasing timestamp within a coin.
std::map<std::string, PriceSeries> load_prices(const std::filesystem::path& path);
std::map<std::string, PriceSeries> parse_prices(std::istream& in);

std::vector<HourGap> missing_hours(const PriceSeries& series);

/// Per-bucket aggregate on a regular time grid. Bucket i covers
/// [origin + i*step, origin + (i+1)*step).
struct BucketSeries {
  Resolution resolution = Resolution::hourly;
  Timestamp origin{};
  std::vector<double> values;

  Timestamp bucket_start(std::size_t i) const {
    return origin + static_cast<std::int64_t>(i) * resolution_step(resolution);
  }
};

/// Mean price per daily or weekly bucket. Only complete buckets are kept;
/// a missing hour inside the kept span throws InputError naming the range.
BucketSeries resample_prices(const PriceSeries& series, Resolution resolution);

/// Mean of consecutive groups of `factor` values starting at index 0; a
/// trailing partial group is dropped. Used to take an hourly grid that starts
/// on a day boundary to daily means.
std::vector<double> block_means(const std::vector<double>& values, std::size_t factor);

}  // namespace coinpulse
