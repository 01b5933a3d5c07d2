#include "logfail/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace logfail {

std::vector<FailureId> prune_candidates(const EventMask& mask, std::span<const FailureId> candidates,
                                        const EventFailureMatrix& m, std::size_t* and_evaluations) {
  std::vector<FailureId> survivors;
  survivors.reserve(candidates.size());
  for (auto f : candidates) {
    if (and_evaluations) ++*and_evaluations;
    if (mask.is_subset_of(m.row(f))) survivors.push_back(f);
  }
  return survivors;
}

Engine::Engine(EventFailureMatrix matrix, Dag dag, HopMatrix hops, EnginePolicy policy)
    : matrix_(std::move(matrix)), dag_(std::move(dag)), hops_(std::move(hops)), policy_(policy) {
  const auto m = matrix_.n_events();
  const auto n = matrix_.n_failures();
  if (dag_.n_events() != m || dag_.n_failures() != n)
    throw std::invalid_argument("DAG is " + std::to_string(dag_.n_events()) + " events x " +
                                std::to_string(dag_.n_failures()) + " failures, matrix is " + std::to_string(m) +
                                " x " + std::to_string(n));
  if (hops_.n_events() != m || hops_.n_failures() != n)
    throw std::invalid_argument("hop matrix is " + std::to_string(hops_.n_events()) + "x" +
                                std::to_string(hops_.n_failures()) + ", expected " + std::to_string(m) + "x" +
                                std::to_string(n));
  if (!(policy_.alert_threshold >= 0.0 && policy_.alert_threshold <= 1.0))
    throw std::invalid_argument("alert threshold must lie in [0, 1]");
}

std::vector<FailureId> Engine::all_failures() const {
  std::vector<FailureId> all(matrix_.n_failures());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = FailureId{i};
  return all;
}

PredictionReport Engine::describe(const Session& s, const EventRecord& e) {
  PredictionReport r;
  r.session = s.id;
  r.timestamp = e.timestamp;
  r.trigger = e;
  for (auto f : s.candidates) {
    const auto h = hops_.at(s.current, f);
    if (h == 0) continue;
    const double p = failure_probability(h);
    r.entries.push_back(ReportEntry{f, h, p, p >= policy_.alert_threshold});
    if (matrix_.row(f) == s.mask) r.terminal.push_back(f);
  }
  return r;
}

std::vector<PredictionReport> Engine::ingest(const EventRecord& e) {
  if (e.event.index >= matrix_.n_events())
    throw std::out_of_range("event index " + std::to_string(e.event.index) + " outside model of " +
                            std::to_string(matrix_.n_events()) + " events");

  std::vector<PredictionReport> continued;
  const auto to = NodeRef::of(e.event);

  for (auto& s : sessions_) {
    if (!dag_.has_edge(NodeRef::of(s.current), to)) {
      if (policy_.strictness == Strictness::lenient) continue;
      s.status = SessionStatus::invalid_sequence;
      PredictionReport r;
      r.session = s.id;
      r.timestamp = e.timestamp;
      r.trigger = e;
      r.verdict = Verdict::invalid_sequence;
      r.closed = true;
      continued.push_back(std::move(r));
      continue;
    }

    const auto prior = s.current;
    s.mask.set(e.event);
    s.current = e.event;
    s.history.push_back(e.event);
    s.last_activity = e.timestamp;

    const bool single_transition = dag_.out_degree(prior) == 1;
    if (policy_.pruning && !(policy_.skip_single_transition && single_transition))
      s.candidates = prune_candidates(s.mask, s.candidates, matrix_);

    if (s.candidates.empty()) {
      s.status = SessionStatus::exhausted;
      PredictionReport r;
      r.session = s.id;
      r.timestamp = e.timestamp;
      r.trigger = e;
      r.verdict = Verdict::rejected_all_candidates;
      r.closed = true;
      continued.push_back(std::move(r));
      continue;
    }

    auto r = describe(s, e);
    if (!dag_.has_event_successor(s.current)) {
      s.status = SessionStatus::exhausted;
      r.closed = true;
    }
    continued.push_back(std::move(r));
  }

  std::vector<PredictionReport> out;
  if (dag_.is_start(e.event)) {
    Session s;
    s.id = next_id_++;
    s.current = e.event;
    s.mask = EventMask(matrix_.n_events());
    s.mask.set(e.event);
    s.history.push_back(e.event);
    s.last_activity = e.timestamp;
    const auto all = all_failures();
    s.candidates = policy_.pruning ? prune_candidates(s.mask, all, matrix_) : all;

    auto r = describe(s, e);
    if (!dag_.has_event_successor(s.current)) {
      s.status = SessionStatus::exhausted;
      r.closed = true;
    }
    out.push_back(std::move(r));
    sessions_.push_back(std::move(s));
  }

  out.insert(out.end(), std::make_move_iterator(continued.rbegin()), std::make_move_iterator(continued.rend()));
  std::erase_if(sessions_, [](const Session& s) { return s.status != SessionStatus::active; });
  return out;
}

std::vector<PredictionReport> Engine::tick(Timestamp now) {
  std::vector<PredictionReport> out;
  if (!policy_.session_timeout) return out;
  for (auto it = sessions_.rbegin(); it != sessions_.rend(); ++it) {
    if (now - it->last_activity <= *policy_.session_timeout) continue;
    it->status = SessionStatus::exhausted;
    PredictionReport r;
    r.session = it->id;
    r.timestamp = now;
    r.verdict = Verdict::expired;
    r.closed = true;
    out.push_back(std::move(r));
  }
  std::erase_if(sessions_, [](const Session& s) { return s.status != SessionStatus::active; });
  return out;
}

std::vector<SessionSummary> Engine::snapshot() const {
  std::vector<SessionSummary> out;
  out.reserve(sessions_.size());
  for (const auto& s : sessions_)
    out.push_back(SessionSummary{s.id, s.current, s.mask, s.candidates, s.status, s.history, s.last_activity});
  return out;
}

}  // namespace logfail
