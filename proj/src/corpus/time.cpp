#include "coinpulse/corpus/time.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "coinpulse/error.hpp"

namespace coinpulse {

namespace {

using namespace std::chrono;

int read_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw InputError(fmt::format("timestamp too short: '{}'", text));
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw InputError(fmt::format("invalid timestamp '{}'", text));
    }
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) throw InputError(fmt::format("invalid timestamp '{}'", text));
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
  const int y = read_digits(text, 0, 4);
  expect(text, 4, '-');
  const int mo = read_digits(text, 5, 2);
  expect(text, 7, '-');
  const int d = read_digits(text, 8, 2);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
    throw InputError(fmt::format("invalid timestamp '{}'", text));
  }
  const int hh = read_digits(text, 11, 2);
  expect(text, 13, ':');
  const int mm = read_digits(text, 14, 2);
  expect(text, 16, ':');
  const int ss = read_digits(text, 17, 2);

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
    throw InputError(fmt::format("timestamp out of range '{}'", text));
  }

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw InputError(fmt::format("invalid fractional seconds in '{}'", text));
  }
  if (pos >= text.size()) throw InputError(fmt::format("timestamp lacks UTC offset '{}'", text));

  seconds offset{0};
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '+' ? 1 : -1;
    const int oh = read_digits(text, pos + 1, 2);
    expect(text, pos + 3, ':');
    const int om = read_digits(text, pos + 4, 2);
    offset = seconds{sign * (oh * 3600 + om * 60)};
    pos += 6;
  } else {
    throw InputError(fmt::format("invalid UTC offset in '{}'", text));
  }
  if (pos != text.size()) throw InputError(fmt::format("trailing characters in timestamp '{}'", text));

  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_rfc3339(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

std::chrono::seconds resolution_step(Resolution r) {
  switch (r) {
    case Resolution::hourly: return hours{1};
    case Resolution::daily: return days{1};
    case Resolution::weekly: return weeks{1};
  }
  return hours{1};
}

std::string_view to_string(Resolution r) {
  switch (r) {
    case Resolution::hourly: return "hourly";
    case Resolution::daily: return "daily";
    case Resolution::weekly: return "weekly";
  }
  return "hourly";
}

Resolution parse_resolution(std::string_view text) {
  if (text == "hourly") return Resolution::hourly;
  if (text == "daily") return Resolution::daily;
  if (text == "weekly") return Resolution::weekly;
  throw InputError(fmt::format("unknown resolution '{}'", text));
}

Timestamp bucket_floor(Timestamp t, Resolution r) {
  switch (r) {
    case Resolution::hourly: return floor<hours>(t);
    case Resolution::daily: return floor<days>(t);
    case Resolution::weekly: {
      const sys_days d = floor<days>(t);
      const weekday wd{d};
      // ISO weeks: Monday is day 0.
      const auto since_monday = days{(wd.c_encoding() + 6) % 7};
      return d - since_monday;
    }
  }
  return t;
}

Timestamp bucket_ceil(Timestamp t, Resolution r) {
  const Timestamp f = bucket_floor(t, r);
  return f == t ? f : f + resolution_step(r);
}

std::int64_t bucket_index(Timestamp origin, Resolution r, Timestamp t) {
  const auto diff = (t - origin).count();
  const auto step = resolution_step(r).count();
  auto q = diff / step;
  if (diff % step != 0 && diff < 0) --q;
  return q;
}

}  // namespace coinpulse
