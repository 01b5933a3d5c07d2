#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "logfail/event_mask.hpp"
#include "logfail/graph.hpp"
#include "logfail/model.hpp"
#include "logfail/parser.hpp"
#include "logfail/timestamp.hpp"

namespace logfail {

enum class Strictness {
  strict,   // a non-edge event invalidates the session
  lenient,  // a non-edge event is ignored by the session
};

struct EnginePolicy {
  bool pruning = true;
  Strictness strictness = Strictness::strict;
  double alert_threshold = 0.9;
  std::optional<std::chrono::milliseconds> session_timeout;
  // Skip re-pruning after a node with a single out-edge. The surviving set is
  // provably unchanged there; off only for differential testing.
  bool skip_single_transition = true;
};

enum class SessionStatus { active, invalid_sequence, exhausted };

enum class Verdict { predicting, invalid_sequence, rejected_all_candidates, expired };

struct ReportEntry {
  FailureId failure;
  unsigned hops = 0;
  double probability = 0.0;
  bool alert = false;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct PredictionReport {
  std::uint64_t session = 0;
  Timestamp timestamp;
  std::optional<EventRecord> trigger;  // empty for expiry reports
  std::vector<ReportEntry> entries;
  std::vector<FailureId> terminal;
  Verdict verdict = Verdict::predicting;
  bool closed = false;  // the session ended with this report

  friend bool operator==(const PredictionReport&, const PredictionReport&) = default;
};

struct SessionSummary {
  std::uint64_t id = 0;
  EventId current;
  EventMask mask;
  std::vector<FailureId> candidates;
  SessionStatus status = SessionStatus::active;
  std::vector<EventId> history;
  Timestamp last_activity;
};

/// Keeps the candidates whose row contains every event in `mask`, i.e.
/// (mask AND row) == mask. One mask-AND per candidate; when
/// `and_evaluations` is given it is incremented once per evaluation.
std::vector<FailureId> prune_candidates(const EventMask& mask, std::span<const FailureId> candidates,
                                        const EventFailureMatrix& m, std::size_t* and_evaluations = nullptr);

/// Walks the DAG as events arrive. Every valid start event opens a new
/// session, and every active session is offered every event, so one event
/// can both start one chain and continue another.
///
/// Not thread-safe; feed ingest()/tick() from one writer in timestamp order.
class Engine {
 public:
  /// Throws std::invalid_argument when the DAG or hop matrix dimensions do
  /// not match the matrix, or the alert threshold is outside [0, 1].
  Engine(EventFailureMatrix matrix, Dag dag, HopMatrix hops, EnginePolicy policy = {});

  /// Reports are ordered newest session first.
  std::vector<PredictionReport> ingest(const EventRecord& e);

  /// Closes sessions idle for longer than the policy timeout.
  std::vector<PredictionReport> tick(Timestamp now);

  std::vector<SessionSummary> snapshot() const;

  const EnginePolicy& policy() const { return policy_; }
  const EventFailureMatrix& matrix() const { return matrix_; }
  const Dag& dag() const { return dag_; }
  const HopMatrix& hops() const { return hops_; }

 private:
  struct Session {
    std::uint64_t id = 0;
    EventId current;
    EventMask mask;
    std::vector<FailureId> candidates;
    SessionStatus status = SessionStatus::active;
    std::vector<EventId> history;
    Timestamp last_activity;
  };

  PredictionReport describe(const Session& s, const EventRecord& e);
  std::vector<FailureId> all_failures() const;

  EventFailureMatrix matrix_;
  Dag dag_;
  HopMatrix hops_;
  EnginePolicy policy_;
  std::vector<Session> sessions_;  // ascending id
  std::uint64_t next_id_ = 1;
};

}  // namespace logfail
