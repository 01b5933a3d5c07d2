#include <cmath>
#include <queue>
#include <random>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "logfail/graph.hpp"
#include "reference_fixture.hpp"

using namespace logfail;
using namespace logfail::testing;

namespace {

using Edge = std::pair<std::string, std::string>;

std::set<Edge> edge_names(const Model& m, const Dag& d) {
  std::set<Edge> out;
  for (std::uint32_t j = 0; j < d.n_events(); ++j)
    for (auto to : d.successors(NodeRef::of(EventId{j})))
      out.emplace(m.event_names[j],
                  to.kind == NodeRef::Kind::event ? m.event_names[to.index] : m.failure_names[to.index]);
  return out;
}

// Walks failure i's chain from event j, one edge at a time, and counts edges
// to the leaf. Independent of build_hop_matrix.
unsigned walk_hops(const EventFailureMatrix& m, EventId j, FailureId i) {
  const auto& row = m.row(i);
  if (!row.test(j)) return 0;
  unsigned hops = 0;
  std::uint32_t at = j.index;
  while (true) {
    std::uint32_t next = at + 1;
    while (next < m.n_events() && !row.test(EventId{next})) ++next;
    ++hops;  // edge to the next event or to the leaf
    if (next >= m.n_events()) return hops;
    at = next;
  }
}

EventFailureMatrix random_matrix(std::mt19937& rng, std::size_t n_events, std::size_t n_failures) {
  std::bernoulli_distribution coin(0.4);
  std::set<std::string> seen;
  std::vector<EventMask> rows;
  while (rows.size() < n_failures) {
    EventMask r(n_events);
    for (std::uint32_t j = 0; j < n_events; ++j)
      if (coin(rng)) r.set(EventId{j});
    if (r.none() || !seen.insert(r.to_string()).second) continue;
    rows.push_back(r);
  }
  return EventFailureMatrix(n_events, rows);
}

}  // namespace

TEST_CASE("build_dag on the reference model") {
  auto m = reference_model();
  auto d = build_dag(m.matrix);
  const std::set<Edge> expected = {
      {"E1", "E5"}, {"E2", "E5"}, {"E3", "E4"}, {"E4", "E6"}, {"E5", "E6"}, {"E5", "E7"}, {"E5", "E8"},
      {"E6", "E7"}, {"E6", "F1"}, {"E6", "F4"}, {"E7", "E8"}, {"E7", "F2"}, {"E8", "F3"}, {"E8", "F5"},
  };
  CHECK(edge_names(m, d) == expected);
  CHECK(d.edge_count() == expected.size());
  CHECK(d.start_events() == std::vector<EventId>{ev(1), ev(2), ev(3), ev(5)});
  for (std::uint32_t i = 0; i < 5; ++i) CHECK(d.successors(NodeRef::of(FailureId{i})).empty());
}

TEST_CASE("build_dag small cases") {
  SUBCASE("single row") {
    auto m = load_model("events: E1\nfailure F: E1\n");
    auto d = build_dag(m.matrix);
    CHECK(edge_names(m, d) == std::set<Edge>{{"E1", "F"}});
    CHECK(d.start_events() == std::vector<EventId>{ev(1)});
  }
  SUBCASE("shared suffix") {
    auto m = load_model("events: E1 E2 E3\nfailure Fa: E1 E3\nfailure Fb: E2 E3\n");
    auto d = build_dag(m.matrix);
    CHECK(edge_names(m, d) == std::set<Edge>{{"E1", "E3"}, {"E2", "E3"}, {"E3", "Fa"}, {"E3", "Fb"}});
  }
  SUBCASE("edges shared between rows are stored once") {
    auto m = load_model("events: A B C\nfailure X: A B\nfailure Y: A B C\n");
    auto d = build_dag(m.matrix);
    CHECK(d.successors(NodeRef::of(EventId{0})).size() == 1);
  }
}

TEST_CASE("has_edge") {
  auto d = build_dag(reference_model().matrix);
  CHECK_FALSE(d.has_edge(NodeRef::of(ev(6)), NodeRef::of(ev(8))));
  CHECK(d.has_edge(NodeRef::of(ev(5)), NodeRef::of(ev(6))));
  CHECK(d.has_edge(NodeRef::of(ev(6)), NodeRef::of(fl(1))));
  for (std::uint32_t i = 0; i < 5; ++i) {
    for (std::uint32_t j = 0; j < 8; ++j) CHECK_FALSE(d.has_edge(NodeRef::of(FailureId{i}), NodeRef::of(EventId{j})));
    for (std::uint32_t k = 0; k < 5; ++k) CHECK_FALSE(d.has_edge(NodeRef::of(FailureId{i}), NodeRef::of(FailureId{k})));
  }
}

TEST_CASE("hop matrix of the reference model") {
  auto m = reference_model();
  auto h = build_hop_matrix(m.matrix);
  REQUIRE(h.n_events() == 8);
  REQUIRE(h.n_failures() == 5);
  for (std::uint32_t j = 0; j < 8; ++j)
    for (std::uint32_t i = 0; i < 5; ++i) CHECK(h.at(EventId{j}, FailureId{i}) == kReferenceHops[j][i]);
  CHECK(h.at(ev(1), fl(1)) == 3);
  CHECK(h.at(ev(5), fl(3)) == 3);
  CHECK(h.at(ev(8), fl(5)) == 1);
  CHECK(h.at(ev(2), fl(1)) == 0);
  CHECK(build_hop_matrix(load_model("events: E1\nfailure F: E1\n").matrix).at(ev(1), fl(1)) == 1);
}

TEST_CASE("property: hop matrix equals the chain-walking oracle on random 12x6 matrices") {
  std::mt19937 rng(20240301);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(rng, 12, 6);
    auto h = build_hop_matrix(m);
    for (std::uint32_t i = 0; i < 6; ++i) {
      auto chain = m.row(FailureId{i}).events();
      for (std::uint32_t j = 0; j < 12; ++j) {
        const auto got = h.at(EventId{j}, FailureId{i});
        CHECK(got == walk_hops(m, EventId{j}, FailureId{i}));
        CHECK((got > 0) == m.cell(FailureId{i}, EventId{j}));
      }
      // Values read k, k-1, ..., 1 along the row.
      for (std::size_t p = 0; p < chain.size(); ++p) CHECK(h.at(chain[p], FailureId{i}) == chain.size() - p);
    }
  }
}

TEST_CASE("property: the DAG is acyclic with event-index order as a topological order") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = random_matrix(rng, 10, 5);
    auto d = build_dag(m);
    const std::size_t n_nodes = d.n_events() + d.n_failures();
    auto slot = [&](NodeRef n) { return n.kind == NodeRef::Kind::event ? n.index : d.n_events() + n.index; };
    std::vector<int> indeg(n_nodes, 0);
    for (std::uint32_t j = 0; j < d.n_events(); ++j)
      for (auto to : d.successors(NodeRef::of(EventId{j}))) {
        ++indeg[slot(to)];
        if (to.kind == NodeRef::Kind::event) CHECK(to.index > j);
      }
    // Kahn's algorithm must consume every node.
    std::queue<std::size_t> ready;
    for (std::size_t s = 0; s < n_nodes; ++s)
      if (indeg[s] == 0) ready.push(s);
    std::size_t seen = 0;
    while (!ready.empty()) {
      auto s = ready.front();
      ready.pop();
      ++seen;
      if (s >= d.n_events()) continue;
      for (auto to : d.successors(NodeRef::of(EventId{static_cast<std::uint32_t>(s)})))
        if (--indeg[slot(to)] == 0) ready.push(slot(to));
    }
    CHECK(seen == n_nodes);
    // Start events are exactly the first column of each row.
    std::set<EventId> starts;
    for (const auto& row : m.rows()) starts.insert(row.events().front());
    CHECK(std::vector<EventId>(starts.begin(), starts.end()) == d.start_events());
    // Rebuilding is deterministic.
    CHECK(build_dag(m) == d);
    CHECK(build_hop_matrix(m) == build_hop_matrix(m));
  }
}

TEST_CASE("failure_probability") {
  CHECK(failure_probability(1) == doctest::Approx(0.9728171817).epsilon(1e-10));
  CHECK(failure_probability(2) == doctest::Approx(kP2).epsilon(1e-10));
  CHECK(failure_probability(3) == doctest::Approx(0.7991446308).epsilon(1e-10));
  CHECK(failure_probability(4) == doctest::Approx(kP4).epsilon(1e-10));
  CHECK(failure_probability(5) == 0.0);
  CHECK(failure_probability(40) == 0.0);
  CHECK_THROWS_AS(failure_probability(0), std::invalid_argument);
  for (unsigned h = 1; h < 5; ++h) CHECK(failure_probability(h) > failure_probability(h + 1));
  for (unsigned h = 1; h <= 4; ++h) CHECK(std::fabs(failure_probability(h) - (100 - std::exp(h)) / 100) < 1e-15);
}

TEST_CASE("graph artifact") {
  auto m = reference_model();
  auto art = graph_artifact(m, build_dag(m.matrix), build_hop_matrix(m.matrix));
  CHECK(art == graph_artifact(m, build_dag(m.matrix), build_hop_matrix(m.matrix)));
  auto doc = nlohmann::json::parse(art);
  CHECK(doc["hop_matrix"]["hops"].get<std::vector<std::vector<unsigned>>>() == kReferenceHops);
  CHECK(doc["start_events"].get<std::vector<std::string>>() == std::vector<std::string>{"E1", "E2", "E3", "E5"});
  CHECK(doc["edges"].size() == 14);
  CHECK(doc["nodes"].size() == 13);

  auto single = load_model("events: E1\nfailure F: E1\n");
  auto doc1 = nlohmann::json::parse(graph_artifact(single, build_dag(single.matrix), build_hop_matrix(single.matrix)));
  CHECK(doc1["nodes"].size() == 2);
  CHECK(doc1["edges"] == nlohmann::json::parse(R"([["E1","F"]])"));
}
