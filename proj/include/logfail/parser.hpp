#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "logfail/ids.hpp"
#include "logfail/model.hpp"
#include "logfail/timestamp.hpp"

namespace logfail {

enum class Comparator { greater, less, greater_equal, less_equal };

/// Numeric threshold on a capture group: the rule fires only when the
/// captured value compares true against the threshold.
struct NumericGuard {
  std::string group;  // group name, or a decimal group number
  Comparator op = Comparator::greater;
  double threshold = 0.0;

  bool passes(double value) const;
};

struct EventRule {
  EventId event;
  std::string pattern;
  boost::regex regex;
  std::optional<NumericGuard> guard;
  std::size_t source_line = 0;
};

struct RuleSet {
  TimestampFormat timestamp = TimestampFormat::iso8601();
  std::vector<EventRule> rules;
};

class RuleError : public std::runtime_error {
 public:
  RuleError(std::size_t line, const std::string& what)
      : std::runtime_error("rules line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Compiles a rules file. One rule per line, tab separated:
///
///   <event name> TAB <regex> [TAB <group><op><threshold>]
///
/// with op one of > < >= <= (or the unicode forms). '#' lines are comments.
/// An optional header line `timestamp: <spec>` selects the timestamp format
/// ("iso8601" or a strptime pattern). Python-style named groups (?P<name>...)
/// are accepted. Every event name must exist in `model`.
RuleSet compile_rules(std::string_view rules_text, const Model& model);

struct EventRecord {
  EventId event;
  Timestamp timestamp;
  std::uint64_t line = 0;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct ParseDiagnostic {
  std::uint64_t line = 0;
  std::string reason;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

struct LineResult {
  std::optional<EventRecord> record;
  std::optional<ParseDiagnostic> diagnostic;
};

/// First rule in file order whose pattern matches and whose guard passes
/// decides the event. A matching line without a readable timestamp yields a
/// diagnostic instead of a record. Anything else yields neither.
LineResult parse_line(std::string_view line, const RuleSet& rules, std::uint64_t line_no);

/// Stable time order; equal timestamps keep source line order.
std::vector<EventRecord> serialize(std::vector<EventRecord> records);

struct WindowConfig {
  std::chrono::milliseconds window_length{std::chrono::seconds{60}};
  bool dedup_within_window = true;
};

struct ParseStats {
  std::uint64_t lines = 0;
  std::uint64_t ignored = 0;
  std::uint64_t matched = 0;
  std::uint64_t diagnostics = 0;
  std::uint64_t deduplicated = 0;
};

struct ParseResult {
  std::vector<EventRecord> records;
  std::vector<ParseDiagnostic> diagnostics;
  ParseStats stats;
};

/// Sliding-window duplicate filter. An occurrence of an event is dropped if
/// the same event was admitted less than window_length earlier, so a burst
/// collapses onto its earliest line. Feed in time order.
class WindowDeduplicator {
 public:
  explicit WindowDeduplicator(WindowConfig config) : config_(config) {}
  bool admit(const EventRecord& r);

 private:
  WindowConfig config_;
  std::map<std::uint32_t, Timestamp> last_admitted_;
};

/// Parses one chunk of log text: parse_line on every line, then serialize,
/// then drop in-window duplicates when enabled. Lines are numbered from
/// `first_line`.
ParseResult parse_window(std::string_view chunk, const RuleSet& rules, const WindowConfig& window,
                         std::uint64_t first_line = 1);

/// parse_window over successive chunks of one log, with line numbering and
/// duplicate-window state carried across chunks.
class StreamParser {
 public:
  StreamParser(RuleSet rules, WindowConfig window) : rules_(std::move(rules)), dedup_(window) {}

  ParseResult feed(std::string_view chunk);

  std::uint64_t next_line() const { return next_line_; }
  void set_next_line(std::uint64_t line) { next_line_ = line; }
  const RuleSet& rules() const { return rules_; }

 private:
  RuleSet rules_;
  WindowDeduplicator dedup_;
  std::uint64_t next_line_ = 1;
};

}  // namespace logfail
