#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "socrhythm/eventlog.hpp"
#include "socrhythm/types.hpp"

namespace socrhythm {

using NodeIndex = std::uint32_t;

struct Edge {
  NodeIndex a = 0;  // a < b
  NodeIndex b = 0;
  double weight = 0;  // seconds, > 0
};

struct Neighbor {
  NodeIndex node = 0;
  double weight = 0;
};

/// Immutable undirected weekly network. Nodes are kept in ascending UserId
/// order, so index order and lexicographic order agree.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeekIndex week() const noexcept { return week_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<UserId>& nodes() const noexcept { return nodes_; }
  const UserId& node(NodeIndex i) const { return nodes_.at(i); }
  std::optional<NodeIndex> index_of(const UserId& user) const;
  /// Throws UnknownNode.
  NodeIndex require(const UserId& user) const;

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(NodeIndex i) const { return adjacency_.at(i); }
  std::optional<double> weight(NodeIndex a, NodeIndex b) const;
  bool has_edge(NodeIndex a, NodeIndex b) const { return weight(a, b).has_value(); }

  std::size_t degree(NodeIndex i) const { return adjacency_.at(i).size(); }
  double strength(NodeIndex i) const;
  double total_weight() const;

 private:
  friend class GraphBuilder;

  WeekIndex week_{};
  std::vector<UserId> nodes_;
  std::unordered_map<UserId, NodeIndex> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Accumulates undirected weights; repeated pairs add up.
class GraphBuilder {
 public:
  explicit GraphBuilder(WeekIndex week) : week_(week) {}

  void add_node(const UserId& user);
  /// Throws Infeasible on a self-loop and NonPositiveWeight for w <= 0.
  void add_weight(const UserId& a, const UserId& b, double w);

  WeightedGraph build() const;

 private:
  WeekIndex week_;
  std::map<UserId, std::map<UserId, double>> pairs_;  // key a < b
  std::map<UserId, bool> nodes_;
};

enum class EdgeStrength { Strong, Weak };

/// Strong iff log10 w > threshold. Throws NonPositiveWeight.
EdgeStrength edge_strength_class(double w, double threshold_log10 = kStrongLog10Threshold);

/// Edge weight = seconds of visits (either direction) overlapping the week.
WeightedGraph build_week_network(std::span<const VisitEvent> events, WeekIndex week,
                                 const WeekClock& clock);

/// Redraws every edge's endpoints uniformly over distinct unused pairs,
/// keeping the node set and the weight multiset.
WeightedGraph null_reattach(const WeightedGraph& g, std::uint64_t seed);

using NodePair = std::pair<NodeIndex, NodeIndex>;

/// `count` uniform pairs of distinct nodes among `node_count` nodes, a < b.
std::vector<NodePair> random_pairs(std::size_t node_count, std::size_t count, std::uint64_t seed);
std::vector<std::pair<UserId, UserId>> random_pairs(std::span<const UserId> nodes, std::size_t count,
                                                    std::uint64_t seed);

/// Hurwitz zeta(s, q) for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// 1 + n / sum ln(k / (kmin - 1/2)) over k >= kmin.
double powerlaw_exponent_closed_form(std::span<const std::int64_t> degrees, std::int64_t kmin);

/// Discrete power-law maximum-likelihood exponent over degrees >= kmin.
/// Needs at least 10 such samples (TooFewSamples). Returns +infinity when
/// every sample equals kmin.
double powerlaw_mle(std::span<const std::int64_t> degrees, std::int64_t kmin);

double degree_powerlaw_exponent(const WeightedGraph& g, std::int64_t kmin = 2);

/// Keeps edges with log10 w >= threshold; nodes left isolated are dropped.
WeightedGraph strong_edge_subgraph(const WeightedGraph& g,
                                   double threshold_log10 = kStrongLog10Threshold);

/// Graph export: `week,user_a,user_b,weight_seconds` with user_a < user_b.
void write_graph(std::ostream& out, const WeightedGraph& g, bool header = true);
std::map<std::int64_t, WeightedGraph> read_graphs(std::istream& in);

}  // namespace socrhythm
