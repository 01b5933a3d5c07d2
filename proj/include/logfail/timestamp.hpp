#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace logfail {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// How to read the timestamp at the start of a log line. The default is an
/// ISO-8601 prefix ("2024-03-01T10:15:02[.123][Z|+05:30]", 'T' or ' ' as the
/// date/time separator). A custom spec is a strptime(3) pattern with one
/// extension: %f reads a fractional-seconds digit run. Fields the pattern
/// does not cover default to 1970-01-01 00:00:00 UTC.
class TimestampFormat {
 public:
  static TimestampFormat iso8601() { return TimestampFormat{}; }
  static TimestampFormat pattern(std::string strptime_spec);

  bool is_iso8601() const { return pattern_.empty(); }
  const std::string& spec() const { return pattern_; }

  /// Parses a timestamp at the start of `line` (leading blanks skipped).
  std::optional<Timestamp> parse_prefix(std::string_view line) const;

 private:
  std::string pattern_;
};

/// "YYYY-MM-DDTHH:MM:SS[.mmm]Z"; milliseconds only when non-zero.
std::string format_timestamp(Timestamp t);

}  // namespace logfail
