#include "logfail/timestamp.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace logfail {

using namespace std::chrono;

namespace {

bool read_digits(std::string_view s, std::size_t& pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  pos += n;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) return false;
  ++pos;
  return true;
}

// Reads a run of digits as a fraction of a second, keeping millisecond precision.
milliseconds read_fraction(std::string_view s, std::size_t& pos) {
  int ms = 0;
  int scale = 100;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    if (scale > 0) {
      ms += (s[pos] - '0') * scale;
      scale /= 10;
    }
    ++pos;
  }
  return milliseconds{ms};
}

std::optional<Timestamp> from_fields(int y, int mo, int d, int h, int mi, int sec, milliseconds frac) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  return time_point_cast<milliseconds>(sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec}) + frac;
}

std::optional<Timestamp> parse_iso(std::string_view s) {
  std::size_t pos = 0;
  int y, mo, d, h, mi, sec;
  if (!read_digits(s, pos, 4, y) || !expect(s, pos, '-') || !read_digits(s, pos, 2, mo) || !expect(s, pos, '-') ||
      !read_digits(s, pos, 2, d))
    return std::nullopt;
  if (pos >= s.size() || (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ')) return std::nullopt;
  ++pos;
  if (!read_digits(s, pos, 2, h) || !expect(s, pos, ':') || !read_digits(s, pos, 2, mi) || !expect(s, pos, ':') ||
      !read_digits(s, pos, 2, sec))
    return std::nullopt;
  milliseconds frac{0};
  if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
    ++pos;
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return std::nullopt;
    frac = read_fraction(s, pos);
  }
  auto t = from_fields(y, mo, d, h, mi, sec, frac);
  if (!t) return std::nullopt;

  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) return t;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    const int sign = s[pos] == '+' ? 1 : -1;
    std::size_t p = pos + 1;
    int oh, om = 0;
    if (!read_digits(s, p, 2, oh)) return t;
    if (p < s.size() && s[p] == ':') ++p;
    read_digits(s, p, 2, om);
    return *t - sign * (hours{oh} + minutes{om});
  }
  return t;
}

std::optional<Timestamp> parse_pattern(std::string_view line, const std::string& pattern) {
  std::tm tm{};
  tm.tm_year = 70;
  tm.tm_mday = 1;
  milliseconds frac{0};

  std::string input(line);
  const char* cursor = input.c_str();
  std::size_t seg_start = 0;
  while (true) {
    auto f = pattern.find("%f", seg_start);
    std::string segment = pattern.substr(seg_start, f == std::string::npos ? std::string::npos : f - seg_start);
    if (!segment.empty()) {
      cursor = ::strptime(cursor, segment.c_str(), &tm);
      if (cursor == nullptr) return std::nullopt;
    }
    if (f == std::string::npos) break;
    std::string_view rest(cursor);
    std::size_t pos = 0;
    if (rest.empty() || !std::isdigit(static_cast<unsigned char>(rest[0]))) return std::nullopt;
    frac = read_fraction(rest, pos);
    cursor += pos;
    seg_start = f + 2;
  }
  return from_fields(tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
}

}  // namespace

TimestampFormat TimestampFormat::pattern(std::string strptime_spec) {
  if (strptime_spec.empty()) throw std::invalid_argument("empty timestamp pattern");
  TimestampFormat f;
  if (strptime_spec == "iso8601" || strptime_spec == "ISO8601") return f;
  f.pattern_ = std::move(strptime_spec);
  return f;
}

std::optional<Timestamp> TimestampFormat::parse_prefix(std::string_view line) const {
  auto b = line.find_first_not_of(" \t");
  if (b == std::string_view::npos) return std::nullopt;
  line.remove_prefix(b);
  return is_iso8601() ? parse_iso(line) : parse_pattern(line, pattern_);
}

std::string format_timestamp(Timestamp t) {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss tod{t - day_point};
  char buf[40];
  const auto ms = tod.subseconds().count();
  if (ms != 0)
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()), static_cast<int>(ms));
  else
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
  return buf;
}

}  // namespace logfail
