#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logfail/event_mask.hpp"
#include "logfail/ids.hpp"

namespace logfail {

/// N x M binary matrix: row i holds the events whose ordered occurrence leads
/// to failure i. Column order is the global temporal order of events, so a
/// row's set bits read left to right are its event chain.
class EventFailureMatrix {
 public:
  EventFailureMatrix() = default;
  EventFailureMatrix(std::size_t n_events, std::vector<EventMask> rows);

  std::size_t n_events() const { return n_events_; }
  std::size_t n_failures() const { return rows_.size(); }

  const EventMask& row(FailureId f) const;
  bool cell(FailureId f, EventId e) const { return row(f).test(e); }
  const std::vector<EventMask>& rows() const { return rows_; }

  /// One line of '0'/'1' per failure; the first character is event 1.
  std::string to_bit_string() const;

  friend bool operator==(const EventFailureMatrix&, const EventFailureMatrix&) = default;

 private:
  std::size_t n_events_ = 0;
  std::vector<EventMask> rows_;
};

/// Matrix plus the name tables from the model config.
struct Model {
  std::vector<std::string> event_names;
  std::vector<std::string> failure_names;
  EventFailureMatrix matrix;

  std::optional<EventId> find_event(std::string_view name) const;
  std::optional<FailureId> find_failure(std::string_view name) const;
  const std::string& name(EventId e) const { return event_names.at(e.index); }
  const std::string& name(FailureId f) const { return failure_names.at(f.index); }
};

class ModelError : public std::runtime_error {
 public:
  ModelError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the line-oriented model config:
///
///   # comment
///   events: E1 E2 E3 ...
///   failure F1: E1 E5 E6
///
/// Event indices follow declaration order. Each failure's events must appear
/// in increasing index order. Throws ModelError on any malformed input,
/// including failures whose event sets coincide.
Model load_model(std::string_view config_text);

/// Inverse of load_model; reloading the output yields an equal Model.
std::string serialize_model(const Model& model);

enum class IssueKind {
  empty_row,
  duplicate_signature,
  width_mismatch,
  chain_exceeds_probability_domain,
};

struct Issue {
  IssueKind kind;
  std::vector<FailureId> failures;
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> violations;
  std::vector<Issue> warnings;
  bool ok() const { return violations.empty(); }
};

/// Longest event chain for which the hop-distance probability stays positive.
inline constexpr std::size_t kMaxChainForProbability = 4;

/// Report-only check of the matrix invariants. Temporal order within a row is
/// carried by column order and cannot be violated by a bare matrix; it is
/// enforced by load_model.
ValidationReport validate_matrix(const EventFailureMatrix& m);

/// Bit j set iff E[f, j] = 1. Throws std::out_of_range for an unknown failure.
EventMask row_mask(const EventFailureMatrix& m, FailureId f);

}  // namespace logfail
