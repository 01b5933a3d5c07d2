#include "logfail/report_format.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace logfail {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::predicting: return "predicting";
    case Verdict::invalid_sequence: return "invalid_sequence";
    case Verdict::rejected_all_candidates: return "rejected_all_candidates";
    case Verdict::expired: return "expired";
  }
  return "unknown";
}

namespace {

std::string fixed10(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", p);
  return buf;
}

bool is_terminal(const PredictionReport& r, FailureId f) {
  return std::find(r.terminal.begin(), r.terminal.end(), f) != r.terminal.end();
}

std::string event_name(const PredictionReport& r, const Model& model) {
  return r.trigger ? model.name(r.trigger->event) : std::string("-");
}

}  // namespace

std::string report_to_json(const PredictionReport& r, const Model& model) {
  nlohmann::ordered_json j;
  j["timestamp"] = format_timestamp(r.timestamp);
  j["event"] = r.trigger ? nlohmann::ordered_json(model.name(r.trigger->event)) : nlohmann::ordered_json(nullptr);
  j["session"] = r.session;
  auto cands = nlohmann::ordered_json::array();
  for (const auto& e : r.entries)
    cands.push_back({{"failure", model.name(e.failure)}, {"hops", e.hops}, {"probability", e.probability},
                     {"alert", e.alert}});
  j["candidates"] = std::move(cands);
  auto term = nlohmann::ordered_json::array();
  for (auto f : r.terminal) term.push_back(model.name(f));
  j["terminal"] = std::move(term);
  j["verdict"] = to_string(r.verdict);
  j["closed"] = r.closed;
  return j.dump();
}

std::string csv_header() { return "timestamp,event,failure,hops,probability,terminal,verdict\n"; }

std::string report_to_csv(const PredictionReport& r, const Model& model) {
  const auto prefix = format_timestamp(r.timestamp) + "," + event_name(r, model) + ",";
  const auto verdict = std::string(to_string(r.verdict));
  if (r.entries.empty()) return prefix + ",,,," + verdict + "\n";
  std::string out;
  for (const auto& e : r.entries)
    out += prefix + model.name(e.failure) + "," + std::to_string(e.hops) + "," + fixed10(e.probability) + "," +
           (is_terminal(r, e.failure) ? "true" : "false") + "," + verdict + "\n";
  return out;
}

std::string trace_header() { return "# time  event  session  alert  hops  failure probability [TERMINAL]\n"; }

std::string report_to_trace(const PredictionReport& r, const Model& model) {
  const auto prefix =
      format_timestamp(r.timestamp) + "  " + event_name(r, model) + "  s" + std::to_string(r.session) + "  ";
  if (r.verdict != Verdict::predicting) {
    auto v = std::string(to_string(r.verdict));
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return prefix + v + "\n";
  }
  std::string out;
  for (const auto& e : r.entries) {
    out += prefix + (e.alert ? "ALERT" : "-    ") + "  h=" + std::to_string(e.hops) + "  " + model.name(e.failure) +
           " p=" + fixed10(e.probability);
    if (is_terminal(r, e.failure)) out += " TERMINAL";
    out += "\n";
  }
  return out;
}

}  // namespace logfail
