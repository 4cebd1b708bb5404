#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "socrhythm/socialnet.hpp"

using namespace socrhythm;

namespace {

VisitEvent visit(const std::string& a, const std::string& b, EpochSeconds start, std::int64_t dwell) {
  return VisitEvent{UserId(a), UserId(b), start, dwell};
}

std::multiset<double> weights(const WeightedGraph& g) {
  std::multiset<double> w;
  for (const auto& e : g.edges()) w.insert(e.weight);
  return w;
}

std::set<std::pair<std::string, std::string>> edge_names(const WeightedGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : g.edges()) out.emplace(g.node(e.a).str(), g.node(e.b).str());
  return out;
}

}  // namespace

TEST_CASE("build_week_network examples") {
  const WeekClock clock{0, 0};
  auto g = build_week_network(std::vector<VisitEvent>{visit("u1", "u2", 100, 600)}, WeekIndex{0}, clock);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0].weight == 600);

  g = build_week_network(std::vector<VisitEvent>{visit("u1", "u2", 100, 600), visit("u2", "u1", 5000, 400)},
                         WeekIndex{0}, clock);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0].weight == 1000);
  CHECK(g.node(0) == UserId("u1"));
  CHECK(g.week().value == 0);
}

TEST_CASE("build_week_network matches a pair accumulator") {
  const WeekClock clock{1583020800, 9};
  Rng rng(21);
  std::vector<VisitEvent> ev;
  for (int i = 0; i < 100; ++i) {
    const auto a = uniform_index(rng, 8);
    const auto b = (a + 1 + uniform_index(rng, 7)) % 8;
    ev.push_back(visit(oracle::node_name(a), oracle::node_name(b),
                       clock.effective_origin() + static_cast<EpochSeconds>(uniform_index(rng, 2 * kSecondsPerWeek)),
                       1 + static_cast<std::int64_t>(uniform_index(rng, 20000))));
  }
  for (std::int64_t week = 0; week < 2; ++week) {
    const EpochSeconds lo = clock.week_start(WeekIndex{week}), hi = lo + kSecondsPerWeek;
    std::map<std::pair<std::string, std::string>, double> brute;
    double total = 0;
    for (const auto& e : ev) {
      const double overlap = static_cast<double>(std::max<EpochSeconds>(0, std::min(hi, e.end()) - std::max(lo, e.start)));
      if (overlap <= 0) continue;
      auto key = std::minmax(e.visitor.str(), e.owner.str());
      brute[{key.first, key.second}] += overlap;
      total += overlap;
    }
    const auto g = build_week_network(ev, WeekIndex{week}, clock);
    CHECK(g.edge_count() == brute.size());
    for (const auto& e : g.edges()) CHECK(e.weight == brute.at({g.node(e.a).str(), g.node(e.b).str()}));
    CHECK(g.total_weight() == doctest::Approx(total));
  }
}

TEST_CASE("builder rejects self-loops and non-positive weights") {
  GraphBuilder b(WeekIndex{0});
  CHECK_THROWS_AS(b.add_weight(UserId("a"), UserId("a"), 1), Error);
  CHECK_THROWS_AS(b.add_weight(UserId("a"), UserId("b"), 0), Error);
  const auto g = b.build();
  CHECK_THROWS_AS(g.require(UserId("zz")), Error);
}

TEST_CASE("edge_strength_class") {
  const double boundary = std::pow(10.0, kStrongLog10Threshold);
  REQUIRE(boundary > 1258);
  REQUIRE(boundary < 1300);
  CHECK(edge_strength_class(1258) == EdgeStrength::Weak);
  CHECK(edge_strength_class(1300) == EdgeStrength::Strong);
  CHECK(edge_strength_class(1e4) == EdgeStrength::Strong);
  CHECK_THROWS_AS(edge_strength_class(0), Error);
}

TEST_CASE("null_reattach preserves weights and node set") {
  GraphBuilder one(WeekIndex{2});
  one.add_weight(UserId("a"), UserId("b"), 42);
  const auto g1 = one.build();
  const auto r1 = null_reattach(g1, 5);
  CHECK(edge_names(r1) == edge_names(g1));
  CHECK(weights(r1) == weights(g1));

  Rng rng(22);
  for (int i = 0; i < 20; ++i) {
    const auto g = oracle::random_graph(15, 0.3, rng);
    const auto r = null_reattach(g, 100 + i);
    CHECK(r.edge_count() == g.edge_count());
    CHECK(weights(r) == weights(g));
    CHECK(r.nodes() == g.nodes());
    CHECK(r.week() == g.week());
  }
}

TEST_CASE("null_reattach placements are uniform") {
  GraphBuilder b(WeekIndex{0});
  b.add_weight(UserId("a"), UserId("b"), 100);
  b.add_weight(UserId("c"), UserId("d"), 200);
  const auto g = b.build();
  // 6 pairs, two distinguishable weights: 30 ordered placements
  std::map<std::pair<std::pair<NodeIndex, NodeIndex>, std::pair<NodeIndex, NodeIndex>>, int> counts;
  constexpr int kDraws = 10000;
  for (int s = 0; s < kDraws; ++s) {
    const auto r = null_reattach(g, derive_seed(77, "reattach", s));
    REQUIRE(r.edge_count() == 2);
    std::pair<NodeIndex, NodeIndex> light, heavy;
    for (const auto& e : r.edges()) (e.weight == 100 ? light : heavy) = {e.a, e.b};
    ++counts[{light, heavy}];
  }
  CHECK(counts.size() == 30);
  const double p = 1.0 / 30, mean = kDraws * p, sd = std::sqrt(kDraws * p * (1 - p));
  for (const auto& [k, c] : counts) CHECK(std::abs(c - mean) <= 3 * sd);
}

TEST_CASE("random_pairs") {
  const std::vector<UserId> two{UserId("a"), UserId("b")};
  for (const auto& [x, y] : random_pairs(two, 50, 1)) {
    CHECK(x == UserId("a"));
    CHECK(y == UserId("b"));
  }
  CHECK(random_pairs(10, 100, 9) == random_pairs(10, 100, 9));

  constexpr std::size_t kDraws = 100000;
  std::map<NodePair, std::size_t> counts;
  for (const auto& pr : random_pairs(5, kDraws, 3)) {
    CHECK(pr.first < pr.second);
    ++counts[pr];
  }
  CHECK(counts.size() == 10);
  const double p = 0.1, mean = kDraws * p, sd = std::sqrt(kDraws * p * (1 - p));
  for (const auto& [k, c] : counts) CHECK(std::abs(static_cast<double>(c) - mean) <= 3 * sd);
}

TEST_CASE("power-law exponent") {
  const std::vector<std::int64_t> flat(50, 2);
  CHECK(std::isinf(powerlaw_mle(flat, 2)));
  CHECK_THROWS_AS(powerlaw_mle(std::vector<std::int64_t>{2, 3, 4, 5, 6}, 2), Error);

  Rng rng(23);
  const oracle::PowerLawSampler sample(4.8, 2);
  std::vector<std::int64_t> degrees(100000);
  for (auto& k : degrees) k = sample(rng);
  const double alpha = powerlaw_mle(degrees, 2);
  CHECK(alpha >= 4.65);
  CHECK(alpha <= 4.95);
  CHECK(alpha == doctest::Approx(oracle::powerlaw_grid_mle(degrees, 2, 4.0, 5.6, 0.0005)).epsilon(0.0002));

  CHECK(hurwitz_zeta(2, 1) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-12));
}

TEST_CASE("strong_edge_subgraph") {
  GraphBuilder weak(WeekIndex{0});
  weak.add_weight(UserId("a"), UserId("b"), 100);
  CHECK(strong_edge_subgraph(weak.build()).node_count() == 0);

  Rng rng(24);
  for (int i = 0; i < 20; ++i) {
    const auto g = oracle::random_graph(20, 0.2, rng, 2, 4.5);
    const auto s = strong_edge_subgraph(g);
    std::set<std::pair<std::string, std::string>> kept;
    std::set<std::string> ends;
    for (const auto& e : g.edges()) {
      if (std::log10(e.weight) >= kStrongLog10Threshold) {
        kept.emplace(g.node(e.a).str(), g.node(e.b).str());
        ends.insert(g.node(e.a).str());
        ends.insert(g.node(e.b).str());
      }
    }
    CHECK(edge_names(s) == kept);
    std::set<std::string> nodes;
    for (const auto& u : s.nodes()) nodes.insert(u.str());
    CHECK(nodes == ends);
    CHECK(edge_names(strong_edge_subgraph(s)) == kept);
    CHECK(strong_edge_subgraph(s).node_count() == s.node_count());
  }
}

TEST_CASE("graph export round-trips") {
  Rng rng(25);
  const auto g = oracle::random_graph(10, 0.4, rng);
  std::stringstream s;
  write_graph(s, g);
  const auto back = read_graphs(s);
  REQUIRE(back.count(0) == 1);
  CHECK(edge_names(back.at(0)) == edge_names(g));
  CHECK(weights(back.at(0)) == weights(g));
}
