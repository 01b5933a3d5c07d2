#include "logfail/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace logfail {

std::size_t Dag::slot(NodeRef n) const {
  if (n.kind == NodeRef::Kind::event) {
    if (n.index >= n_events_) throw std::out_of_range("event node out of range");
    return n.index;
  }
  if (n.index >= n_failures_) throw std::out_of_range("failure node out of range");
  return n_events_ + n.index;
}

const std::vector<NodeRef>& Dag::successors(NodeRef from) const { return adjacency_[slot(from)]; }

bool Dag::has_event_successor(EventId e) const {
  const auto& succ = successors(NodeRef::of(e));
  return !succ.empty() && succ.front().kind == NodeRef::Kind::event;
}

bool Dag::has_edge(NodeRef from, NodeRef to) const {
  const auto& succ = successors(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

bool Dag::is_start(EventId e) const { return e.index < is_start_.size() && is_start_[e.index]; }

std::size_t Dag::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : adjacency_) n += s.size();
  return n;
}

Dag build_dag(const EventFailureMatrix& m) {
  Dag d;
  d.n_events_ = m.n_events();
  d.n_failures_ = m.n_failures();
  d.adjacency_.resize(d.n_events_ + d.n_failures_);
  d.is_start_.assign(d.n_events_, false);

  for (std::uint32_t i = 0; i < m.n_failures(); ++i) {
    auto chain = m.row(FailureId{i}).events();
    if (chain.empty()) continue;
    d.is_start_[chain.front().index] = true;
    for (std::size_t p = 0; p + 1 < chain.size(); ++p)
      d.adjacency_[chain[p].index].push_back(NodeRef::of(chain[p + 1]));
    d.adjacency_[chain.back().index].push_back(NodeRef::of(FailureId{i}));
  }

  for (auto& succ : d.adjacency_) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  for (std::uint32_t j = 0; j < d.n_events_; ++j)
    if (d.is_start_[j]) d.start_events_.push_back(EventId{j});
  return d;
}

HopMatrix build_hop_matrix(const EventFailureMatrix& m) {
  HopMatrix h(m.n_events(), m.n_failures());
  for (std::uint32_t i = 0; i < m.n_failures(); ++i) {
    auto chain = m.row(FailureId{i}).events();
    const auto k = static_cast<unsigned>(chain.size());
    for (unsigned p = 0; p < k; ++p) h.at(chain[p], FailureId{i}) = k - p;
  }
  return h;
}

double failure_probability(unsigned hops) {
  if (hops == 0) throw std::invalid_argument("failure_probability: zero hops (failure unreachable from event)");
  if (hops > kMaxChainForProbability) return 0.0;
  return (100.0 - std::exp(static_cast<double>(hops))) / 100.0;
}

std::string graph_artifact(const Model& model, const Dag& dag, const HopMatrix& hops) {
  using nlohmann::ordered_json;
  auto node_name = [&](NodeRef n) {
    return n.kind == NodeRef::Kind::event ? model.event_names.at(n.index) : model.failure_names.at(n.index);
  };

  ordered_json doc;
  doc["events"] = model.event_names;
  doc["failures"] = model.failure_names;

  auto nodes = ordered_json::array();
  for (std::uint32_t j = 0; j < dag.n_events(); ++j)
    nodes.push_back({{"name", model.event_names[j]}, {"kind", "event"}, {"index", j + 1}});
  for (std::uint32_t i = 0; i < dag.n_failures(); ++i)
    nodes.push_back({{"name", model.failure_names[i]}, {"kind", "failure"}, {"index", i + 1}});
  doc["nodes"] = std::move(nodes);

  auto edges = ordered_json::array();
  for (std::uint32_t j = 0; j < dag.n_events(); ++j)
    for (auto to : dag.successors(NodeRef::of(EventId{j})))
      edges.push_back(ordered_json::array({model.event_names[j], node_name(to)}));
  doc["edges"] = std::move(edges);

  auto starts = ordered_json::array();
  for (auto e : dag.start_events()) starts.push_back(model.event_names[e.index]);
  doc["start_events"] = std::move(starts);

  auto matrix = ordered_json::array();
  for (std::uint32_t j = 0; j < hops.n_events(); ++j) {
    auto row = ordered_json::array();
    for (std::uint32_t i = 0; i < hops.n_failures(); ++i) row.push_back(hops.at(EventId{j}, FailureId{i}));
    matrix.push_back(std::move(row));
  }
  doc["hop_matrix"] = {{"rows", hops.n_events()}, {"cols", hops.n_failures()}, {"hops", std::move(matrix)}};

  return doc.dump(2) + "\n";
}

}  // namespace logfail
