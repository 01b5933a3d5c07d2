#include "logfail/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "text_util.hpp"

namespace logfail {

using detail::split_lines;
using detail::trim;

bool NumericGuard::passes(double value) const {
  switch (op) {
    case Comparator::greater: return value > threshold;
    case Comparator::less: return value < threshold;
    case Comparator::greater_equal: return value >= threshold;
    case Comparator::less_equal: return value <= threshold;
  }
  return false;
}

namespace {

// Boost spells named groups (?<name>...); accept the Python (?P<name>...) form too.
std::string normalize_named_groups(std::string_view pattern) {
  std::string out;
  out.reserve(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '\\' && i + 1 < pattern.size()) {
      out += pattern[i];
      out += pattern[++i];
      continue;
    }
    if (pattern.substr(i, 4) == "(?P<") {
      out += "(?<";
      i += 3;
      continue;
    }
    out += pattern[i];
  }
  return out;
}

struct OpToken {
  std::string_view text;
  Comparator op;
};

constexpr OpToken kOps[] = {
    {">=", Comparator::greater_equal}, {"<=", Comparator::less_equal},
    {"\xE2\x89\xA5", Comparator::greater_equal},  // ≥
    {"\xE2\x89\xA4", Comparator::less_equal},     // ≤
    {">", Comparator::greater},        {"<", Comparator::less},
};

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::string tmp(s);
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size()) return std::nullopt;
  return v;
}

NumericGuard parse_guard(std::string_view text, const boost::regex& re, const std::string& pattern,
                         std::size_t line_no) {
  auto pos = text.find_first_of("<>\xE2");
  if (pos == std::string_view::npos) throw RuleError(line_no, "malformed guard '" + std::string(text) + "'");
  NumericGuard g;
  std::string_view rest;
  bool found = false;
  for (const auto& tok : kOps) {
    if (text.substr(pos, tok.text.size()) == tok.text) {
      g.op = tok.op;
      rest = text.substr(pos + tok.text.size());
      found = true;
      break;
    }
  }
  if (!found) throw RuleError(line_no, "malformed guard '" + std::string(text) + "'");
  g.group = std::string(trim(text.substr(0, pos)));
  if (g.group.empty()) throw RuleError(line_no, "guard names no capture group");
  auto threshold = to_double(rest);
  if (!threshold) throw RuleError(line_no, "guard threshold is not a number: '" + std::string(rest) + "'");
  g.threshold = *threshold;

  const bool numeric = std::all_of(g.group.begin(), g.group.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (numeric) {
    auto idx = std::stoul(g.group);
    if (idx == 0 || idx > re.mark_count())
      throw RuleError(line_no, "guard refers to missing capture group " + g.group);
  } else {
    if (pattern.find("(?<" + g.group + ">") == std::string::npos &&
        pattern.find("(?'" + g.group + "'") == std::string::npos)
      throw RuleError(line_no, "guard refers to missing capture group '" + g.group + "'");
  }
  return g;
}

std::optional<std::string> captured(const boost::cmatch& m, const NumericGuard& g) {
  const bool numeric = std::all_of(g.group.begin(), g.group.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  const auto& sub = numeric ? m[static_cast<int>(std::stoul(g.group))] : m[g.group];
  if (!sub.matched) return std::nullopt;
  return sub.str();
}

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto t = s.find('\t', start);
    out.push_back(s.substr(start, t == std::string_view::npos ? std::string_view::npos : t - start));
    if (t == std::string_view::npos) break;
    start = t + 1;
  }
  return out;
}

}  // namespace

RuleSet compile_rules(std::string_view rules_text, const Model& model) {
  RuleSet set;
  bool seen_rule = false;
  auto lines = split_lines(rules_text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = lines[i];
    auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    constexpr std::string_view kTimestamp = "timestamp:";
    if (stripped.starts_with(kTimestamp)) {
      if (seen_rule) throw RuleError(line_no, "timestamp header must precede all rules");
      auto spec = trim(stripped.substr(kTimestamp.size()));
      if (spec.empty()) throw RuleError(line_no, "empty timestamp spec");
      set.timestamp = TimestampFormat::pattern(std::string(spec));
      continue;
    }

    auto fields = split_tabs(line);
    // Collapse empty fields produced by runs of tabs used for alignment.
    std::vector<std::string_view> cols;
    for (auto f : fields)
      if (!trim(f).empty()) cols.push_back(trim(f));
    if (cols.size() < 2 || cols.size() > 3)
      throw RuleError(line_no, "expected '<event>\\t<regex>[\\t<guard>]'");

    EventRule rule;
    rule.source_line = line_no;
    auto event = model.find_event(cols[0]);
    if (!event) throw RuleError(line_no, "unknown event '" + std::string(cols[0]) + "'");
    rule.event = *event;
    rule.pattern = std::string(cols[1]);
    const auto normalized = normalize_named_groups(cols[1]);
    try {
      rule.regex = boost::regex(normalized, boost::regex::perl);
    } catch (const boost::regex_error& e) {
      throw RuleError(line_no, std::string("bad regex: ") + e.what());
    }
    if (cols.size() == 3) rule.guard = parse_guard(cols[2], rule.regex, normalized, line_no);
    set.rules.push_back(std::move(rule));
    seen_rule = true;
  }
  return set;
}

LineResult parse_line(std::string_view line, const RuleSet& rules, std::uint64_t line_no) {
  LineResult result;
  boost::cmatch m;
  for (const auto& rule : rules.rules) {
    if (!boost::regex_search(line.data(), line.data() + line.size(), m, rule.regex)) continue;
    if (rule.guard) {
      auto text = captured(m, *rule.guard);
      if (!text) continue;
      auto value = to_double(*text);
      if (!value || !rule.guard->passes(*value)) continue;
    }
    auto ts = rules.timestamp.parse_prefix(line);
    if (!ts) {
      result.diagnostic = ParseDiagnostic{line_no, "unparseable timestamp on line matching rule at rules line " +
                                                       std::to_string(rule.source_line)};
      return result;
    }
    result.record = EventRecord{rule.event, *ts, line_no};
    return result;
  }
  return result;
}

std::vector<EventRecord> serialize(std::vector<EventRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const EventRecord& a, const EventRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.line < b.line;
  });
  return records;
}

bool WindowDeduplicator::admit(const EventRecord& r) {
  if (!config_.dedup_within_window) return true;
  auto [it, inserted] = last_admitted_.try_emplace(r.event.index, r.timestamp);
  if (inserted) return true;
  if (r.timestamp - it->second < config_.window_length) return false;
  it->second = r.timestamp;
  return true;
}

namespace {

ParseResult parse_chunk(std::string_view chunk, const RuleSet& rules, WindowDeduplicator& dedup,
                        std::uint64_t first_line) {
  ParseResult out;
  std::vector<EventRecord> matched;
  auto lines = split_lines(chunk);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto r = parse_line(lines[i], rules, first_line + i);
    ++out.stats.lines;
    if (r.record) {
      ++out.stats.matched;
      matched.push_back(*r.record);
    } else if (r.diagnostic) {
      ++out.stats.diagnostics;
      out.diagnostics.push_back(std::move(*r.diagnostic));
    } else {
      ++out.stats.ignored;
    }
  }
  for (const auto& rec : serialize(std::move(matched))) {
    if (dedup.admit(rec))
      out.records.push_back(rec);
    else
      ++out.stats.deduplicated;
  }
  return out;
}

}  // namespace

ParseResult parse_window(std::string_view chunk, const RuleSet& rules, const WindowConfig& window,
                         std::uint64_t first_line) {
  WindowDeduplicator dedup(window);
  return parse_chunk(chunk, rules, dedup, first_line);
}

ParseResult StreamParser::feed(std::string_view chunk) {
  auto out = parse_chunk(chunk, rules_, dedup_, next_line_);
  next_line_ += out.stats.lines;
  return out;
}

}  // namespace logfail
