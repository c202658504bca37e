#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace coinpulse {

using Timestamp = std::chrono::sys_seconds;
using Hours = std::chrono::hours;

enum class Resolution { hourly, daily, weekly };

/// Parses an RFC 3339 instant ("2023-06-10T14:00:00Z", "...+02:00",
/// fractional seconds truncated). Throws InputError on malformed input.
Timestamp parse_rfc3339(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

std::chrono::seconds resolution_step(Resolution r);
std::string_view to_string(Resolution r);
Resolution parse_resolution(std::string_view text);

/// Start of the bucket containing t: clock hour, UTC midnight, or Monday
/// 00:00 UTC.
Timestamp bucket_floor(Timestamp t, Resolution r);

/// Smallest bucket boundary >= t.
Timestamp bucket_ceil(Timestamp t, Resolution r);

/// floor((t - origin) / step). Negative when t precedes origin.
std::int64_t bucket_index(Timestamp origin, Resolution r, Timestamp t);

inline bool on_hour_boundary(Timestamp t) { return bucket_floor(t, Resolution::hourly) == t; }

}  // namespace coinpulse
