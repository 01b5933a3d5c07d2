#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "logfail/ids.hpp"
#include "logfail/model.hpp"

namespace logfail {

/// A DAG vertex: either an event node or a failure leaf.
struct NodeRef {
  enum class Kind : std::uint8_t { event, failure };
  Kind kind = Kind::event;
  std::uint32_t index = 0;

  static constexpr NodeRef of(EventId e) { return {Kind::event, e.index}; }
  static constexpr NodeRef of(FailureId f) { return {Kind::failure, f.index}; }

  friend constexpr auto operator<=>(NodeRef, NodeRef) = default;
};

/// Event/failure DAG stored as a node array with one successor list per node.
/// Event nodes occupy slots [0, M), failure leaves [M, M + N). Successor
/// lists are sorted (event targets by index, then failure leaves).
class Dag {
 public:
  std::size_t n_events() const { return n_events_; }
  std::size_t n_failures() const { return n_failures_; }

  const std::vector<NodeRef>& successors(NodeRef from) const;
  std::size_t out_degree(EventId e) const { return successors(NodeRef::of(e)).size(); }
  /// True when some edge leaves `e` towards another event.
  bool has_event_successor(EventId e) const;

  bool has_edge(NodeRef from, NodeRef to) const;

  const std::vector<EventId>& start_events() const { return start_events_; }
  bool is_start(EventId e) const;

  std::size_t edge_count() const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  friend Dag build_dag(const EventFailureMatrix& m);
  std::size_t slot(NodeRef n) const;

  std::size_t n_events_ = 0;
  std::size_t n_failures_ = 0;
  std::vector<std::vector<NodeRef>> adjacency_;
  std::vector<EventId> start_events_;
  std::vector<bool> is_start_;
};

/// For each row with set columns j1 < ... < jk: edges j1->j2, ..., jk->leaf.
/// Edges shared between rows are stored once. Start events are the first
/// set column of each row.
Dag build_dag(const EventFailureMatrix& m);

/// M x N hop counts: hops(j, i) is the number of edges from event j to the
/// leaf of failure i along failure i's own chain, 0 when event j is not part
/// of that chain.
class HopMatrix {
 public:
  HopMatrix() = default;
  HopMatrix(std::size_t n_events, std::size_t n_failures)
      : n_events_(n_events), n_failures_(n_failures), hops_(n_events * n_failures, 0) {}

  std::size_t n_events() const { return n_events_; }
  std::size_t n_failures() const { return n_failures_; }

  unsigned at(EventId e, FailureId f) const { return hops_.at(e.index * n_failures_ + f.index); }
  unsigned& at(EventId e, FailureId f) { return hops_.at(e.index * n_failures_ + f.index); }

  friend bool operator==(const HopMatrix&, const HopMatrix&) = default;

 private:
  std::size_t n_events_ = 0;
  std::size_t n_failures_ = 0;
  std::vector<unsigned> hops_;
};

HopMatrix build_hop_matrix(const EventFailureMatrix& m);

/// Hop-distance failure probability (100 - e^h) / 100. Rises exponentially as
/// the failure gets closer. Only positive for h <= 4; larger h returns 0.
/// Throws std::invalid_argument for h == 0.
double failure_probability(unsigned hops);

/// JSON document listing nodes, edges, start events and the hop matrix.
/// Output is a pure function of the model.
std::string graph_artifact(const Model& model, const Dag& dag, const HopMatrix& hops);

}  // namespace logfail
