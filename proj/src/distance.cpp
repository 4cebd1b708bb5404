#include "socrhythm/distance.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>

#include "socrhythm/entrainment.hpp"
#include "socrhythm/random.hpp"
#include "socrhythm/stats.hpp"

namespace socrhythm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_source(const WeightedGraph& g, NodeIndex source) {
  if (source >= g.node_count()) throw Error(Errc::UnknownNode, "source index out of range");
}

}  // namespace

const char* to_string(DistanceMode m) { return m == DistanceMode::Weighted ? "weighted" : "hops"; }

DistanceField weighted_sssp(const WeightedGraph& g, NodeIndex source) {
  check_source(g, source);
  DistanceField f;
  f.source = source;
  f.distance.assign(g.node_count(), kInf);
  f.hops.assign(g.node_count(), 0);
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  f.distance[source] = 0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > f.distance[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      const double nd = d + 1.0 / nb.weight;
      if (nd < f.distance[nb.node]) {
        f.distance[nb.node] = nd;
        f.hops[nb.node] = f.hops[u] + 1;
        queue.emplace(nd, nb.node);
      }
    }
  }
  return f;
}

DistanceField weighted_sssp(const WeightedGraph& g, const UserId& source) {
  return weighted_sssp(g, g.require(source));
}

DistanceField hop_sssp(const WeightedGraph& g, NodeIndex source) {
  check_source(g, source);
  DistanceField f;
  f.source = source;
  f.distance.assign(g.node_count(), kInf);
  f.hops.assign(g.node_count(), 0);
  std::deque<NodeIndex> queue{source};
  f.distance[source] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(u)) {
      if (f.distance[nb.node] != kInf) continue;
      f.hops[nb.node] = f.hops[u] + 1;
      f.distance[nb.node] = f.hops[nb.node];
      queue.push_back(nb.node);
    }
  }
  return f;
}

DistanceField hop_sssp(const WeightedGraph& g, const UserId& source) { return hop_sssp(g, g.require(source)); }

std::vector<NodeIndex> sample_sources(const WeightedGraph& g, const DistanceOptions& opt) {
  std::vector<NodeIndex> all(g.node_count());
  std::iota(all.begin(), all.end(), NodeIndex{0});
  if (g.node_count() < opt.exact_below || opt.source_sample >= all.size()) return all;
  Rng rng(opt.seed);
  for (std::size_t i = 0; i < opt.source_sample; ++i) {
    std::swap(all[i], all[i + uniform_index(rng, all.size() - i)]);
  }
  all.resize(opt.source_sample);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<double> default_distance_edges(DistanceMode mode, std::size_t max_hops) {
  if (mode == DistanceMode::Weighted) return log10_edges(-5, 0, 4);
  std::vector<double> edges;
  for (std::size_t h = 0; h <= max_hops; ++h) edges.push_back(static_cast<double>(h) + 0.5);
  return edges;
}

namespace {

DistanceField run(const WeightedGraph& g, NodeIndex s, DistanceMode mode) {
  return mode == DistanceMode::Weighted ? weighted_sssp(g, s) : hop_sssp(g, s);
}

}  // namespace

void collect_distance_similarities(const WeightedGraph& g, const RhythmTable& rhythms,
                                   const DistanceOptions& opt, std::vector<double>& distances,
                                   std::vector<double>& similarities) {
  std::vector<const RhythmVector*> by_node(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i) by_node[i] = rhythms.find(g.node(i), g.week());
  for (const auto s : sample_sources(g, opt)) {
    if (!by_node[s]) continue;
    const auto field = run(g, s, opt.mode);
    for (NodeIndex t = 0; t < g.node_count(); ++t) {
      if (t == s || !field.reachable(t) || !by_node[t]) continue;
      distances.push_back(field.distance[t]);
      similarities.push_back(similarity(*by_node[s], *by_node[t]));
    }
  }
}

DistanceCurve similarity_vs_distance(const WeightedGraph& g, const RhythmTable& rhythms,
                                     const DistanceOptions& opt, std::span<const double> edges,
                                     std::size_t baseline_pairs) {
  std::vector<double> x, y;
  collect_distance_similarities(g, rhythms, opt, x, y);
  DistanceCurve out;
  out.curve = bin_by(x, y, edges, opt.mode == DistanceMode::Weighted);
  const auto base = baseline_similarities(g, rhythms, baseline_pairs, derive_seed(opt.seed, "baseline"));
  out.baseline_count = base.size();
  out.baseline_mean = base.empty() ? 0 : stats::mean(base);
  out.baseline_sd = stats::sample_sd(base);
  return out;
}

double reach_fraction(const WeightedGraph& g, double d, const DistanceOptions& opt,
                      ReachDenominator denominator) {
  if (!(d >= 0)) throw Error(Errc::Infeasible, "distance threshold must be >= 0");
  const auto sources = sample_sources(g, opt);
  if (sources.empty() || g.node_count() < 2) return 0;
  double acc = 0;
  std::size_t used = 0;
  for (const auto s : sources) {
    const auto field = run(g, s, opt.mode);
    std::size_t within = 0;
    std::size_t reachable = 0;
    for (NodeIndex t = 0; t < g.node_count(); ++t) {
      if (t == s || !field.reachable(t)) continue;
      ++reachable;
      if (field.distance[t] <= d) ++within;
    }
    const std::size_t denom = denominator == ReachDenominator::AllPairs ? g.node_count() - 1 : reachable;
    if (denom == 0) continue;
    acc += static_cast<double>(within) / static_cast<double>(denom);
    ++used;
  }
  return used == 0 ? 0 : acc / static_cast<double>(used);
}

std::optional<double> decay_threshold_distance(const BinnedCurve& curve, double baseline, double factor) {
  std::optional<double> out;
  for (std::size_t i = 0; i < curve.bins.size(); ++i) {
    const auto& b = curve.bins[i];
    if (b.count == 0) continue;
    if (b.mean >= factor * baseline) out = curve.center(i);
  }
  return out;
}

}  // namespace socrhythm
