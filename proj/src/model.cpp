#include "logfail/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "text_util.hpp"

namespace logfail {

using detail::split_lines;
using detail::split_names;
using detail::strip_comment;
using detail::trim;

EventFailureMatrix::EventFailureMatrix(std::size_t n_events, std::vector<EventMask> rows)
    : n_events_(n_events), rows_(std::move(rows)) {}

const EventMask& EventFailureMatrix::row(FailureId f) const {
  if (f.index >= rows_.size()) throw std::out_of_range("unknown failure index " + std::to_string(f.index));
  return rows_[f.index];
}

std::string EventFailureMatrix::to_bit_string() const {
  std::string out;
  for (const auto& r : rows_) {
    out += r.to_string();
    out += '\n';
  }
  return out;
}

std::optional<EventId> Model::find_event(std::string_view name) const {
  auto it = std::find(event_names.begin(), event_names.end(), name);
  if (it == event_names.end()) return std::nullopt;
  return EventId{static_cast<std::uint32_t>(it - event_names.begin())};
}

std::optional<FailureId> Model::find_failure(std::string_view name) const {
  auto it = std::find(failure_names.begin(), failure_names.end(), name);
  if (it == failure_names.end()) return std::nullopt;
  return FailureId{static_cast<std::uint32_t>(it - failure_names.begin())};
}

namespace {

bool valid_name(std::string_view name) {
  return !name.empty() && name.find_first_of(":#") == std::string_view::npos;
}

}  // namespace

Model load_model(std::string_view config_text) {
  Model model;
  bool have_events = false;
  std::map<std::string, std::size_t, std::less<>> row_by_signature;
  std::vector<EventMask> rows;

  auto lines = split_lines(config_text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = trim(strip_comment(lines[i]));
    if (line.empty()) continue;

    if (!have_events) {
      constexpr std::string_view kEvents = "events:";
      if (!line.starts_with(kEvents)) throw ModelError(line_no, "expected 'events:' declaration first");
      for (auto name : split_names(line.substr(kEvents.size()))) {
        if (!valid_name(name)) throw ModelError(line_no, "invalid event name '" + std::string(name) + "'");
        if (model.find_event(name)) throw ModelError(line_no, "duplicate event name '" + std::string(name) + "'");
        model.event_names.emplace_back(name);
      }
      if (model.event_names.empty()) throw ModelError(line_no, "no events declared");
      have_events = true;
      continue;
    }

    constexpr std::string_view kFailure = "failure";
    if (!line.starts_with(kFailure) || line.size() == kFailure.size() ||
        (line[kFailure.size()] != ' ' && line[kFailure.size()] != '\t'))
      throw ModelError(line_no, "expected 'failure <name>: <events>'");
    auto rest = line.substr(kFailure.size());
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw ModelError(line_no, "missing ':' after failure name");
    auto fname = trim(rest.substr(0, colon));
    if (!valid_name(fname) || fname.find_first_of(" \t") != std::string_view::npos)
      throw ModelError(line_no, "invalid failure name '" + std::string(fname) + "'");
    if (model.find_failure(fname)) throw ModelError(line_no, "duplicate failure name '" + std::string(fname) + "'");

    auto seq = split_names(rest.substr(colon + 1));
    if (seq.empty()) throw ModelError(line_no, "empty failure sequence for '" + std::string(fname) + "'");

    EventMask row(model.event_names.size());
    std::optional<EventId> prev;
    for (auto ename : seq) {
      auto e = model.find_event(ename);
      if (!e) throw ModelError(line_no, "unknown event name '" + std::string(ename) + "'");
      if (prev && *e <= *prev)
        throw ModelError(line_no, "events out of temporal order: '" + std::string(ename) + "' after '" +
                                      model.event_names[prev->index] + "'");
      row.set(*e);
      prev = e;
    }

    auto signature = row.to_string();
    if (auto it = row_by_signature.find(signature); it != row_by_signature.end())
      throw ModelError(line_no, "duplicate failure signature: '" + std::string(fname) + "' has the same events as '" +
                                    model.failure_names[it->second] + "'");
    row_by_signature.emplace(std::move(signature), model.failure_names.size());
    model.failure_names.emplace_back(fname);
    rows.push_back(std::move(row));
  }

  if (!have_events) throw ModelError(lines.size(), "missing 'events:' declaration");
  if (rows.empty()) throw ModelError(lines.size(), "no failures declared");
  model.matrix = EventFailureMatrix(model.event_names.size(), std::move(rows));
  return model;
}

std::string serialize_model(const Model& model) {
  std::ostringstream out;
  out << "events:";
  for (const auto& name : model.event_names) out << ' ' << name;
  out << '\n';
  for (std::size_t i = 0; i < model.failure_names.size(); ++i) {
    out << "failure " << model.failure_names[i] << ':';
    for (auto e : model.matrix.rows()[i].events()) out << ' ' << model.event_names[e.index];
    out << '\n';
  }
  return out.str();
}

ValidationReport validate_matrix(const EventFailureMatrix& m) {
  ValidationReport report;
  std::map<std::string, std::vector<FailureId>> by_signature;

  for (std::uint32_t i = 0; i < m.n_failures(); ++i) {
    const FailureId f{i};
    const auto& row = m.row(f);
    const std::string label = "failure #" + std::to_string(i + 1);
    if (row.width() != m.n_events()) {
      report.violations.push_back({IssueKind::width_mismatch, {f},
                                   label + ": row width " + std::to_string(row.width()) + " != " +
                                       std::to_string(m.n_events()) + " events"});
      continue;
    }
    const auto len = row.count();
    if (len == 0) {
      report.violations.push_back({IssueKind::empty_row, {f}, label + ": empty event sequence"});
      continue;
    }
    if (len > kMaxChainForProbability)
      report.warnings.push_back({IssueKind::chain_exceeds_probability_domain, {f},
                                 label + ": chain length " + std::to_string(len) +
                                     " exceeds the hop-probability domain (max " +
                                     std::to_string(kMaxChainForProbability) + "); far hops score 0"});
    by_signature[row.to_string()].push_back(f);
  }

  for (auto& [sig, fs] : by_signature) {
    if (fs.size() < 2) continue;
    std::string msg = "duplicate failure signature " + sig + " shared by";
    for (auto f : fs) msg += " #" + std::to_string(f.index + 1);
    report.violations.push_back({IssueKind::duplicate_signature, fs, std::move(msg)});
  }
  return report;
}

EventMask row_mask(const EventFailureMatrix& m, FailureId f) { return m.row(f); }

}  // namespace logfail
