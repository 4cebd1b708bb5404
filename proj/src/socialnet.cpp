#include "socrhythm/socialnet.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_set>

#include <boost/math/tools/minima.hpp>

#include "socrhythm/csv.hpp"
#include "socrhythm/random.hpp"

namespace socrhythm {

std::optional<NodeIndex> WeightedGraph::index_of(const UserId& user) const {
  const auto it = index_.find(user);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex WeightedGraph::require(const UserId& user) const {
  const auto idx = index_of(user);
  if (!idx) throw Error(Errc::UnknownNode, "node '" + user.str() + "' is not in the graph");
  return *idx;
}

std::optional<double> WeightedGraph::weight(NodeIndex a, NodeIndex b) const {
  const auto& adj = adjacency_.at(a);
  const auto it = std::lower_bound(adj.begin(), adj.end(), b,
                                   [](const Neighbor& n, NodeIndex v) { return n.node < v; });
  if (it == adj.end() || it->node != b) return std::nullopt;
  return it->weight;
}

double WeightedGraph::strength(NodeIndex i) const {
  double s = 0;
  for (const auto& n : adjacency_.at(i)) s += n.weight;
  return s;
}

double WeightedGraph::total_weight() const {
  double s = 0;
  for (const auto& e : edges_) s += e.weight;
  return s;
}

void GraphBuilder::add_node(const UserId& user) { nodes_.emplace(user, true); }

void GraphBuilder::add_weight(const UserId& a, const UserId& b, double w) {
  if (a == b) throw Error(Errc::Infeasible, "self-loop on '" + a.str() + "'");
  if (!(w > 0)) throw Error(Errc::NonPositiveWeight, "edge weight must be > 0");
  add_node(a);
  add_node(b);
  if (b < a) {
    pairs_[b][a] += w;
  } else {
    pairs_[a][b] += w;
  }
}

WeightedGraph GraphBuilder::build() const {
  WeightedGraph g;
  g.week_ = week_;
  g.nodes_.reserve(nodes_.size());
  for (const auto& [user, unused] : nodes_) {
    g.index_.emplace(user, static_cast<NodeIndex>(g.nodes_.size()));
    g.nodes_.push_back(user);
  }
  g.adjacency_.resize(g.nodes_.size());
  for (const auto& [a, row] : pairs_) {
    const NodeIndex ia = g.index_.at(a);
    for (const auto& [b, w] : row) {
      const NodeIndex ib = g.index_.at(b);
      g.edges_.push_back({ia, ib, w});
      g.adjacency_[ia].push_back({ib, w});
      g.adjacency_[ib].push_back({ia, w});
    }
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
  return g;
}

EdgeStrength edge_strength_class(double w, double threshold_log10) {
  if (!(w > 0)) throw Error(Errc::NonPositiveWeight, "edge weight must be > 0");
  return std::log10(w) > threshold_log10 ? EdgeStrength::Strong : EdgeStrength::Weak;
}

WeightedGraph build_week_network(std::span<const VisitEvent> events, WeekIndex week,
                                 const WeekClock& clock) {
  const EpochSeconds ws = clock.week_start(week);
  const EpochSeconds we = ws + kSecondsPerWeek;
  GraphBuilder builder(week);
  for (const auto& e : events) {
    const EpochSeconds lo = std::max(e.start, ws);
    const EpochSeconds hi = std::min(e.end(), we);
    if (hi <= lo || e.visitor == e.owner) continue;
    builder.add_weight(e.visitor, e.owner, static_cast<double>(hi - lo));
  }
  return builder.build();
}

WeightedGraph null_reattach(const WeightedGraph& g, std::uint64_t seed) {
  const std::uint64_t n = g.node_count();
  const std::uint64_t m = g.edge_count();
  const std::uint64_t max_pairs = n < 2 ? 0 : n * (n - 1) / 2;
  if (m > max_pairs) {
    throw Error(Errc::Infeasible, std::to_string(m) + " edges do not fit on " + std::to_string(n) + " nodes");
  }
  Rng rng(seed);
  std::unordered_set<std::uint64_t> used;
  used.reserve(m * 2);
  GraphBuilder builder(g.week());
  for (const auto& user : g.nodes()) builder.add_node(user);
  for (const auto& e : g.edges()) {
    while (true) {
      const auto i = uniform_index(rng, n);
      const auto j = uniform_index(rng, n);
      if (i == j) continue;
      const auto a = std::min(i, j);
      const auto b = std::max(i, j);
      if (!used.insert(a * n + b).second) continue;
      builder.add_weight(g.node(static_cast<NodeIndex>(a)), g.node(static_cast<NodeIndex>(b)), e.weight);
      break;
    }
  }
  return builder.build();
}

std::vector<NodePair> random_pairs(std::size_t node_count, std::size_t count, std::uint64_t seed) {
  std::vector<NodePair> out;
  if (node_count < 2) {
    if (count > 0) throw Error(Errc::Infeasible, "random pairs need at least two nodes");
    return out;
  }
  Rng rng(seed);
  out.reserve(count);
  while (out.size() < count) {
    const auto i = static_cast<NodeIndex>(uniform_index(rng, node_count));
    const auto j = static_cast<NodeIndex>(uniform_index(rng, node_count));
    if (i == j) continue;
    out.emplace_back(std::min(i, j), std::max(i, j));
  }
  return out;
}

std::vector<std::pair<UserId, UserId>> random_pairs(std::span<const UserId> nodes, std::size_t count,
                                                    std::uint64_t seed) {
  std::vector<std::pair<UserId, UserId>> out;
  for (const auto& [a, b] : random_pairs(nodes.size(), count, seed)) out.emplace_back(nodes[a], nodes[b]);
  return out;
}

namespace {

// ln of zeta(s, q) * q^s, i.e. sum_k (1 + k/q)^-s, by Euler-Maclaurin.
double log_scaled_hurwitz(double s, double q) {
  constexpr int kDirect = 12;
  constexpr double kBernoulli[] = {1.0 / 6,   -1.0 / 30,      1.0 / 42,  -1.0 / 30,
                                   5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  const double lq = std::log(q);
  double sum = 0;
  for (int k = 0; k < kDirect; ++k) sum += std::exp(-s * (std::log(q + k) - lq));
  const double a = q + kDirect;
  const double r = std::exp(-s * (std::log(a) - lq));  // (a/q)^-s
  sum += a * r / (s - 1) + 0.5 * r;
  double rising = s;      // s (s+1) ... (s+2j-2)
  double factorial = 2;   // (2j)!
  double power = r / a;   // q^s a^(-s-2j+1)
  for (int j = 1; j <= 8; ++j) {
    sum += kBernoulli[j - 1] / factorial * rising * power;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    factorial *= (2 * j + 1) * (2 * j + 2);
    power /= a * a;
  }
  return std::log(sum);
}

}  // namespace

double hurwitz_zeta(double s, double q) {
  if (!(s > 1) || !(q > 0)) throw Error(Errc::Infeasible, "hurwitz_zeta needs s > 1, q > 0");
  return std::exp(log_scaled_hurwitz(s, q) - s * std::log(q));
}

double powerlaw_exponent_closed_form(std::span<const std::int64_t> degrees, std::int64_t kmin) {
  double n = 0;
  double sum = 0;
  for (auto k : degrees) {
    if (k < kmin) continue;
    n += 1;
    sum += std::log(static_cast<double>(k) / (static_cast<double>(kmin) - 0.5));
  }
  return 1 + n / sum;
}

double powerlaw_mle(std::span<const std::int64_t> degrees, std::int64_t kmin) {
  if (kmin < 1) throw Error(Errc::Infeasible, "kmin must be >= 1");
  std::size_t n = 0;
  double sum_log = 0;
  bool all_at_min = true;
  for (auto k : degrees) {
    if (k < kmin) continue;
    ++n;
    sum_log += std::log(static_cast<double>(k));
    all_at_min = all_at_min && k == kmin;
  }
  if (n < 10) {
    throw Error(Errc::TooFewSamples, "power-law fit needs >= 10 samples with k >= kmin, got " + std::to_string(n));
  }
  if (all_at_min) return std::numeric_limits<double>::infinity();

  const double q = static_cast<double>(kmin);
  const double mean_log = sum_log / static_cast<double>(n);
  // Per-sample negative log-likelihood; convex in alpha.
  const auto nll = [&](double alpha) {
    return alpha * mean_log + log_scaled_hurwitz(alpha, q) - alpha * std::log(q);
  };
  double hi = std::max(8.0, 2 * powerlaw_exponent_closed_form(degrees, kmin));
  while (nll(hi * 1.5) < nll(hi)) hi *= 1.5;
  const auto [alpha, value] =
      boost::math::tools::brent_find_minima(nll, 1.0 + 1e-9, hi, std::numeric_limits<double>::digits / 2);
  (void)value;
  return alpha;
}

double degree_powerlaw_exponent(const WeightedGraph& g, std::int64_t kmin) {
  std::vector<std::int64_t> degrees;
  degrees.reserve(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i) degrees.push_back(static_cast<std::int64_t>(g.degree(i)));
  return powerlaw_mle(degrees, kmin);
}

WeightedGraph strong_edge_subgraph(const WeightedGraph& g, double threshold_log10) {
  GraphBuilder builder(g.week());
  for (const auto& e : g.edges()) {
    if (std::log10(e.weight) >= threshold_log10) builder.add_weight(g.node(e.a), g.node(e.b), e.weight);
  }
  return builder.build();
}

void write_graph(std::ostream& out, const WeightedGraph& g, bool header) {
  if (header) out << "week,user_a,user_b,weight_seconds\n";
  for (const auto& e : g.edges()) {
    out << g.week().value << ',' << g.node(e.a).str() << ',' << g.node(e.b).str() << ','
        << csv::format_double(e.weight) << '\n';
  }
}

std::map<std::int64_t, WeightedGraph> read_graphs(std::istream& in) {
  std::map<std::int64_t, GraphBuilder> builders;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty()) continue;
    const auto f = csv::split(trimmed);
    const auto bad = [&](const char* what) {
      return Error(Errc::MalformedRecord, "graph line " + std::to_string(lineno) + ": " + what);
    };
    if (f.size() != 4) throw bad("expected 4 fields");
    const auto week = csv::parse_int(f[0]);
    if (!week) {
      if (lineno == 1) continue;
      throw bad("bad week");
    }
    const auto w = csv::parse_double(f[3]);
    if (!w) throw bad("bad weight");
    auto it = builders.try_emplace(*week, WeekIndex{*week}).first;
    it->second.add_weight(UserId(std::string(f[1])), UserId(std::string(f[2])), *w);
  }
  std::map<std::int64_t, WeightedGraph> out;
  for (const auto& [week, b] : builders) out.emplace(week, b.build());
  return out;
}

}  // namespace socrhythm
