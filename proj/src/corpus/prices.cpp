#include "coinpulse/corpus/prices.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string_view>

#include <fmt/format.h>

#include "coinpulse/error.hpp"

namespace coinpulse {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::map<std::string, PriceSeries> parse_prices(std::istream& in) {
  std::map<std::string, PriceSeries> out;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw InputError("prices: empty file");
  ++line_no;
  if (trim(line) != "timestamp,coin,price") {
    throw InputError(fmt::format("prices: expected header 'timestamp,coin,price', got '{}'", trim(line)));
  }
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const auto cells = split_commas(row);
    if (cells.size() != 3) throw InputError(fmt::format("prices: line {}: expected 3 columns", line_no));
    Timestamp at;
    try {
      at = parse_rfc3339(trim(cells[0]));
    } catch (const InputError& e) {
      throw InputError(fmt::format("prices: line {}: {}", line_no, e.what()));
    }
    if (!on_hour_boundary(at)) throw InputError(fmt::format("prices: line {}: timestamp not on an hour boundary", line_no));
    const auto coin = std::string(trim(cells[1]));
    if (coin.empty()) throw InputError(fmt::format("prices: line {}: empty coin", line_no));
    const auto price_text = trim(cells[2]);
    double price = 0.0;
    const auto [ptr, ec] = std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
    if (ec != std::errc{} || ptr != price_text.data() + price_text.size()) {
      throw InputError(fmt::format("prices: line {}: invalid price '{}'", line_no, price_text));
    }
    if (!(price > 0.0)) throw InputError(fmt::format("prices: line {}: price must be positive", line_no));

    auto& series = out[coin];
    series.coin_id = coin;
    if (!series.points.empty() && series.points.back().at >= at) {
      throw InputError(fmt::format("prices: line {}: timestamps for {} not strictly increasing", line_no, coin));
    }
    series.points.push_back({at, price});
  }
  return out;
}

std::map<std::string, PriceSeries> load_prices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read prices file '{}'", path.string()));
  return parse_prices(in);
}

std::vector<HourGap> missing_hours(const PriceSeries& series) {
  std::vector<HourGap> gaps;
  for (std::size_t i = 1; i < series.points.size(); ++i) {
    const auto prev = series.points[i - 1].at;
    const auto cur = series.points[i].at;
    if (cur - prev > Hours{1}) gaps.push_back({prev + Hours{1}, cur - Hours{1}});
  }
  return gaps;
}

BucketSeries resample_prices(const PriceSeries& series, Resolution resolution) {
  if (resolution == Resolution::hourly) throw InputError("resample_prices: resolution must be daily or weekly");
  BucketSeries out;
  out.resolution = resolution;
  if (series.points.empty()) return out;

  const auto step = resolution_step(resolution);
  const Timestamp first = bucket_ceil(series.points.front().at, resolution);
  const Timestamp end = bucket_floor(series.points.back().at + Hours{1}, resolution);
  out.origin = first;
  if (end <= first) return out;

  const auto buckets = static_cast<std::size_t>((end - first) / step);
  std::vector<double> sums(buckets, 0.0);
  std::vector<std::size_t> counts(buckets, 0);
  const PricePoint* prev = nullptr;
  for (const auto& p : series.points) {
    if (p.at < first || p.at >= end) continue;
    if (prev != nullptr && p.at - prev->at > Hours{1}) {
      throw InputError(fmt::format("resample_prices: {} missing hours {} .. {}", series.coin_id,
                                   format_rfc3339(prev->at + Hours{1}), format_rfc3339(p.at - Hours{1})));
    }
    if (prev == nullptr && p.at != first) {
      throw InputError(fmt::format("resample_prices: {} missing hours {} .. {}", series.coin_id,
                                   format_rfc3339(first), format_rfc3339(p.at - Hours{1})));
    }
    const auto idx = static_cast<std::size_t>(bucket_index(first, resolution, p.at));
    sums[idx] += p.price;
    ++counts[idx];
    prev = &p;
  }
  if (prev == nullptr || prev->at != end - Hours{1}) {
    const Timestamp from = prev == nullptr ? first : prev->at + Hours{1};
    throw InputError(fmt::format("resample_prices: {} missing hours {} .. {}", series.coin_id, format_rfc3339(from),
                                 format_rfc3339(end - Hours{1})));
  }
  out.values.resize(buckets);
  for (std::size_t i = 0; i < buckets; ++i) {
    out.values[i] = sums[i] / static_cast<double>(counts[i]);
  }
  return out;
}

std::vector<double> block_means(const std::vector<double>& values, std::size_t factor) {
  std::vector<double> out;
  if (factor == 0) return out;
  for (std::size_t start = 0; start + factor <= values.size(); start += factor) {
    double sum = 0.0;
    for (std::size_t i = start; i < start + factor; ++i) sum += values[i];
    out.push_back(sum / static_cast<double>(factor));
  }
  return out;
}

}  // namespace coinpulse
