#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "logfail/parser.hpp"
#include "reference_fixture.hpp"

using namespace logfail;
using namespace logfail::testing;
using namespace std::chrono;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(LOGFAIL_FIXTURES) + "/" + name);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Timestamp tod(int h, int m, int s) { return Timestamp{hours{h} + minutes{m} + seconds{s}}; }

const Model& drift_model() {
  static const Model m = load_model("events: E1 E2\nfailure F: E1 E2\n");
  return m;
}

RuleSet drift_rules() {
  return compile_rules("timestamp: %H:%M:%S\nE1 \t clock drift (?P<v>[0-9.]+)ppm \t v>5.0\n", drift_model());
}

}  // namespace

TEST_CASE("compile_rules") {
  SUBCASE("rule with guard") {
    auto rs = drift_rules();
    REQUIRE(rs.rules.size() == 1);
    CHECK(rs.rules[0].event == ev(1));
    REQUIRE(rs.rules[0].guard);
    CHECK(rs.rules[0].guard->group == "v");
    CHECK(rs.rules[0].guard->op == Comparator::greater);
    CHECK(rs.rules[0].guard->threshold == 5.0);
    CHECK_FALSE(rs.timestamp.is_iso8601());
  }
  SUBCASE("empty rules file") {
    auto rs = compile_rules("", drift_model());
    CHECK(rs.rules.empty());
    CHECK(rs.timestamp.is_iso8601());
    CHECK_FALSE(parse_line("2024-01-01T00:00:00Z clock drift 9ppm", rs, 1).record);
  }
  SUBCASE("comparators") {
    auto rs = compile_rules("E1\tx(\\d+)\t1>=3\nE1\ty(?<n>\\d+)\tn<=3\nE2\tz(?P<q>\\d+)\tq\xE2\x89\xA5 7\n", drift_model());
    REQUIRE(rs.rules.size() == 3);
    CHECK(rs.rules[0].guard->op == Comparator::greater_equal);
    CHECK(rs.rules[1].guard->op == Comparator::less_equal);
    CHECK(rs.rules[2].guard->op == Comparator::greater_equal);
    CHECK(rs.rules[2].guard->threshold == 7.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(compile_rules("E9\tfoo\n", drift_model()), RuleError);
    CHECK_THROWS_AS(compile_rules("E1\tfoo(\n", drift_model()), RuleError);
    CHECK_THROWS_AS(compile_rules("E1\tfoo (?P<v>\\d+)\tv~5\n", drift_model()), RuleError);
    CHECK_THROWS_AS(compile_rules("E1\tfoo (?P<v>\\d+)\tw>5\n", drift_model()), RuleError);
    CHECK_THROWS_AS(compile_rules("E1\tfoo (\\d+)\t2>5\n", drift_model()), RuleError);
    CHECK_THROWS_AS(compile_rules("E1\tfoo (?P<v>\\d+)\tv>abc\n", drift_model()), RuleError);
    CHECK_THROWS_AS(compile_rules("E1 foo\n", drift_model()), RuleError);
    CHECK_THROWS_AS(compile_rules("E1\tfoo\ntimestamp: %H\n", drift_model()), RuleError);
    try {
      compile_rules("# c\nE1\tok\nE7\tbad\n", drift_model());
      FAIL("expected RuleError");
    } catch (const RuleError& e) {
      CHECK(e.line() == 3);
    }
  }
}

TEST_CASE("parse_line with a threshold guard") {
  auto rs = drift_rules();
  auto hit = parse_line("10:15:02 clock drift 8.2ppm", rs, 4);
  REQUIRE(hit.record);
  CHECK(hit.record->event == ev(1));
  CHECK(hit.record->timestamp == tod(10, 15, 2));
  CHECK(hit.record->line == 4);

  auto miss = parse_line("10:15:02 clock drift 3.1ppm", rs, 5);
  CHECK_FALSE(miss.record);
  CHECK_FALSE(miss.diagnostic);

  auto bad_ts = parse_line("xx:15:02 clock drift 9.9ppm", rs, 6);
  CHECK_FALSE(bad_ts.record);
  REQUIRE(bad_ts.diagnostic);
  CHECK(bad_ts.diagnostic->line == 6);

  auto unrelated_bad_ts = parse_line("garbage line", rs, 7);
  CHECK_FALSE(unrelated_bad_ts.diagnostic);
}

TEST_CASE("first matching rule with a passing guard wins") {
  auto rs = compile_rules(
      "E2\tdrift (?P<v>[0-9.]+)\tv>10\n"
      "E1\tdrift (?P<v>[0-9.]+)\tv>5\n"
      "E2\tdrift\n",
      drift_model());
  CHECK(parse_line("2024-01-01T00:00:00Z drift 12", rs, 1).record->event == ev(1 + 1));
  CHECK(parse_line("2024-01-01T00:00:00Z drift 7", rs, 1).record->event == ev(1));
  CHECK(parse_line("2024-01-01T00:00:00Z drift 1", rs, 1).record->event == ev(2));
}

TEST_CASE("timestamp formats") {
  auto iso = TimestampFormat::iso8601();
  auto base = sys_days{year{2024} / 3 / 1};
  CHECK(iso.parse_prefix("2024-03-01T10:15:02Z x") == Timestamp{base + hours{10} + minutes{15} + seconds{2}});
  CHECK(iso.parse_prefix("2024-03-01 10:15:02.250 x") ==
        Timestamp{base + hours{10} + minutes{15} + seconds{2} + milliseconds{250}});
  CHECK(iso.parse_prefix("2024-03-01T10:15:02+01:00") == Timestamp{base + hours{9} + minutes{15} + seconds{2}});
  CHECK_FALSE(iso.parse_prefix("2024-13-01T10:15:02Z"));
  CHECK_FALSE(iso.parse_prefix("10:15:02 only time"));

  auto syslog = TimestampFormat::pattern("%Y/%m/%d %H:%M:%S.%f");
  CHECK(syslog.parse_prefix("2024/03/01 10:15:02.5 msg") ==
        Timestamp{base + hours{10} + minutes{15} + seconds{2} + milliseconds{500}});
  CHECK(format_timestamp(Timestamp{base + hours{10} + minutes{15} + seconds{2}}) == "2024-03-01T10:15:02Z");
  CHECK(format_timestamp(Timestamp{base + milliseconds{7}}) == "2024-03-01T00:00:00.007Z");
}

TEST_CASE("serialize orders by time, then source line") {
  std::vector<EventRecord> in = {rec(2, 5, 1), rec(1, 3, 2)};
  auto out = serialize(in);
  CHECK(out == std::vector<EventRecord>{rec(1, 3, 2), rec(2, 5, 1)});

  auto tie = serialize({rec(1, 3, 10), rec(2, 3, 4)});
  CHECK(tie == std::vector<EventRecord>{rec(2, 3, 4), rec(1, 3, 10)});

  auto sorted = std::vector<EventRecord>{rec(1, 1, 1), rec(2, 2, 2), rec(1, 2, 3)};
  CHECK(serialize(sorted) == sorted);
}

TEST_CASE("parse_window and in-window de-duplication") {
  auto rs = drift_rules();
  const std::string chunk = "00:00:01 clock drift 9ppm\n00:00:02 clock drift 9ppm\n";
  SUBCASE("dedup on keeps the earliest") {
    auto r = parse_window(chunk, rs, WindowConfig{seconds{60}, true});
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].timestamp == tod(0, 0, 1));
    CHECK(r.stats.deduplicated == 1);
  }
  SUBCASE("dedup off keeps both") {
    auto r = parse_window(chunk, rs, WindowConfig{seconds{60}, false});
    CHECK(r.records.size() == 2);
  }
  SUBCASE("empty chunk") {
    auto r = parse_window("", rs, WindowConfig{});
    CHECK(r.records.empty());
    CHECK(r.stats.lines == 0);
  }
  SUBCASE("a repeat after the window is a new occurrence") {
    auto r = parse_window("00:00:01 clock drift 9ppm\n00:02:00 clock drift 9ppm\n", rs, WindowConfig{seconds{60}, true});
    CHECK(r.records.size() == 2);
  }
  SUBCASE("out-of-order lines come out sorted") {
    auto r = parse_window("00:00:09 clock drift 9ppm\n00:00:01 clock drift 9ppm\n", rs, WindowConfig{seconds{1}, false});
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].timestamp < r.records[1].timestamp);
    CHECK(r.records[0].line == 2);
  }
}

TEST_CASE("mapping a sample log: four designated lines among noise") {
  auto model = load_model(slurp("sample_model.cfg"));
  auto rs = compile_rules(slurp("sample.rules"), model);
  auto r = parse_window(slurp("sample.log"), rs, WindowConfig{});
  REQUIRE(r.records.size() == 4);
  CHECK(r.records[0] == EventRecord{ev(1), tod(10, 15, 2), 1});
  CHECK(r.records[1] == EventRecord{ev(2), tod(10, 16, 5), 3});
  CHECK(r.records[2] == EventRecord{ev(3), tod(10, 19, 0), 8});
  CHECK(r.records[3] == EventRecord{ev(4), tod(10, 20, 10), 10});
  CHECK(r.stats.lines == 10);
  CHECK(r.diagnostics.empty());
}

TEST_CASE("property: line accounting, sortedness and determinism on random logs") {
  auto rs = compile_rules(
      "E1\tclock drift (?P<v>[0-9.]+)ppm\tv>5.0\n"
      "E2\tpeer lost\n",
      drift_model());
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> sec(0, 3600), kind(0, 4), val(0, 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::string chunk;
    const int n = 1 + trial % 40;
    for (int i = 0; i < n; ++i) {
      char ts[32];
      const int s = sec(rng);
      std::snprintf(ts, sizeof ts, "2024-01-01T%02d:%02d:%02dZ ", s / 3600, (s / 60) % 60, s % 60);
      switch (kind(rng)) {
        case 0: chunk += std::string(ts) + "clock drift " + std::to_string(val(rng)) + "ppm\n"; break;
        case 1: chunk += std::string(ts) + "peer lost\n"; break;
        case 2: chunk += "??:??:?? peer lost\n"; break;
        default: chunk += std::string(ts) + "noise\n"; break;
      }
    }
    for (bool dedup : {false, true}) {
      auto r = parse_window(chunk, rs, WindowConfig{seconds{30}, dedup});
      CHECK(r.stats.ignored + r.stats.matched + r.stats.diagnostics == static_cast<std::uint64_t>(n));
      CHECK(r.records.size() + r.stats.deduplicated == r.stats.matched);
      CHECK(r.diagnostics.size() == r.stats.diagnostics);
      for (std::size_t i = 1; i < r.records.size(); ++i) {
        CHECK(r.records[i - 1].timestamp <= r.records[i].timestamp);
        if (r.records[i - 1].timestamp == r.records[i].timestamp) CHECK(r.records[i - 1].line < r.records[i].line);
      }
      auto again = parse_window(chunk, rs, WindowConfig{seconds{30}, dedup});
      CHECK(again.records == r.records);
    }
  }
}

TEST_CASE("StreamParser carries line numbers and window state across chunks") {
  auto rs = drift_rules();
  StreamParser sp(rs, WindowConfig{seconds{60}, true});
  auto a = sp.feed("00:00:01 clock drift 9ppm\nnoise\n");
  auto b = sp.feed("00:00:30 clock drift 9ppm\n00:01:05 clock drift 9ppm\n");
  REQUIRE(a.records.size() == 1);
  REQUIRE(b.records.size() == 1);
  CHECK(b.records[0].line == 4);
  CHECK(b.records[0].timestamp == tod(0, 1, 5));

  auto whole = parse_window("00:00:01 clock drift 9ppm\nnoise\n00:00:30 clock drift 9ppm\n00:01:05 clock drift 9ppm\n",
                            rs, WindowConfig{seconds{60}, true});
  std::vector<EventRecord> joined = a.records;
  joined.insert(joined.end(), b.records.begin(), b.records.end());
  CHECK(joined == whole.records);
}
