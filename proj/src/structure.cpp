#include "socrhythm/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "socrhythm/random.hpp"

namespace socrhythm {

Partition Partition::from_labels(const std::vector<std::uint32_t>& labels) {
  Partition p;
  p.community.resize(labels.size());
  std::map<std::uint32_t, std::uint32_t> renumber;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [it, inserted] = renumber.try_emplace(labels[i], static_cast<std::uint32_t>(renumber.size()));
    if (inserted) p.members.emplace_back();
    p.community[i] = it->second;
    p.members[it->second].push_back(static_cast<NodeIndex>(i));
  }
  return p;
}

double modularity(const WeightedGraph& g, const Partition& p) {
  const double two_m = 2 * g.total_weight();
  if (two_m == 0) return 0;
  std::vector<double> internal(p.community_count(), 0.0);
  std::vector<double> total(p.community_count(), 0.0);
  for (NodeIndex i = 0; i < g.node_count(); ++i) total[p.community[i]] += g.strength(i);
  for (const auto& e : g.edges()) {
    if (p.community[e.a] == p.community[e.b]) internal[p.community[e.a]] += 2 * e.weight;
  }
  double q = 0;
  for (std::size_t c = 0; c < internal.size(); ++c) q += internal[c] / two_m - (total[c] / two_m) * (total[c] / two_m);
  return q;
}

namespace {

// Working graph for one Louvain level. Self-loop weight counts both ends.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
  std::vector<double> self_loop;
  std::vector<double> strength;
  double two_m = 0;

  std::size_t size() const { return adj.size(); }
};

LevelGraph from_weighted(const WeightedGraph& g) {
  LevelGraph lg;
  const auto n = g.node_count();
  lg.adj.resize(n);
  lg.self_loop.assign(n, 0.0);
  lg.strength.assign(n, 0.0);
  for (NodeIndex i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(i)) {
      lg.adj[i].emplace_back(nb.node, nb.weight);
      lg.strength[i] += nb.weight;
    }
  }
  lg.two_m = std::accumulate(lg.strength.begin(), lg.strength.end(), 0.0);
  return lg;
}

// One round of local moves. Returns true if any node changed community.
bool local_moves(const LevelGraph& lg, std::vector<std::uint32_t>& comm, Rng& rng) {
  const std::size_t n = lg.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += lg.strength[i];

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);

  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool any = false;
  bool moved = true;
  int passes = 0;
  while (moved && passes++ < 1000) {
    moved = false;
    for (const auto i : order) {
      const auto own = comm[i];
      const double ki = lg.strength[i];
      touched.clear();
      for (const auto& [j, w] : lg.adj[i]) {
        const auto c = comm[j];
        if (link[c] == 0) touched.push_back(c);
        link[c] += w;
      }
      tot[own] -= ki;
      // gain(c) proportional to link_c - tot_c * k_i / 2m
      std::uint32_t best = own;
      double best_gain = link[own] - tot[own] * ki / lg.two_m;
      std::sort(touched.begin(), touched.end());
      for (const auto c : touched) {
        const double gain = link[c] - tot[c] * ki / lg.two_m;
        if (gain > best_gain + 1e-12 * std::max(1.0, std::abs(best_gain))) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += ki;
      for (const auto c : touched) link[c] = 0;
      link[own] = 0;
      if (best != own) {
        comm[i] = best;
        moved = true;
        any = true;
      }
    }
  }
  return any;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::size_t count) {
  LevelGraph out;
  out.adj.resize(count);
  out.self_loop.assign(count, 0.0);
  out.strength.assign(count, 0.0);
  std::vector<std::map<std::uint32_t, double>> rows(count);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    const auto ci = comm[i];
    out.self_loop[ci] += lg.self_loop[i];
    out.strength[ci] += lg.strength[i];
    for (const auto& [j, w] : lg.adj[i]) {
      const auto cj = comm[j];
      if (cj == ci) {
        out.self_loop[ci] += w;  // each internal edge is seen from both ends
      } else {
        rows[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    for (const auto& [d, w] : rows[c]) out.adj[c].emplace_back(d, w);
  }
  out.two_m = lg.two_m;
  return out;
}

// Relabels to 0..k-1 in order of first appearance.
std::size_t compact(std::vector<std::uint32_t>& comm) {
  std::map<std::uint32_t, std::uint32_t> ids;
  for (auto& c : comm) {
    const auto [it, inserted] = ids.try_emplace(c, static_cast<std::uint32_t>(ids.size()));
    c = it->second;
  }
  return ids.size();
}

}  // namespace

Partition detect_communities(const WeightedGraph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0u);
  if (n == 0 || g.edge_count() == 0) return Partition::from_labels(labels);

  Rng rng(seed);
  LevelGraph level = from_weighted(g);
  while (true) {
    std::vector<std::uint32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0u);
    if (!local_moves(level, comm, rng)) break;
    const auto count = compact(comm);
    for (auto& l : labels) l = comm[l];
    if (count == level.size()) break;
    level = aggregate(level, comm, count);
  }
  return Partition::from_labels(labels);
}

double weighted_clustering_coefficient(const WeightedGraph& g, NodeIndex i) {
  if (i >= g.node_count()) throw Error(Errc::UnknownNode, "node index out of range");
  const auto nbrs = g.neighbors(i);
  const std::size_t d = nbrs.size();
  if (d <= 1) return 0;
  std::map<NodeIndex, double> w_i;
  double s = 0;
  for (const auto& nb : nbrs) {
    w_i.emplace(nb.node, nb.weight);
    s += nb.weight;
  }
  double num = 0;
  for (const auto& j : nbrs) {
    for (const auto& k : g.neighbors(j.node)) {
      if (k.node == i) continue;
      const auto it = w_i.find(k.node);
      if (it == w_i.end()) continue;
      num += (j.weight + it->second) / 2;
    }
  }
  return num / (s * static_cast<double>(d - 1));
}

double weighted_clustering_coefficient(const WeightedGraph& g, const UserId& user) {
  return weighted_clustering_coefficient(g, g.require(user));
}

std::vector<double> weighted_clustering_all(const WeightedGraph& g) {
  std::vector<double> out(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i) out[i] = weighted_clustering_coefficient(g, i);
  return out;
}

double mean_pairwise_similarity(const std::vector<const RhythmVector*>& members) {
  const double n = static_cast<double>(members.size());
  Profile24 sum{};
  for (const auto* r : members) {
    for (std::size_t h = 0; h < sum.size(); ++h) sum[h] += r->values[h];
  }
  double norm2 = 0;
  for (double v : sum) norm2 += v * v;
  return (norm2 - n) / (n * (n - 1));
}

CommunityReport community_similarity_vs_clustering(const WeightedGraph& g, const Partition& p,
                                                   const RhythmTable& rhythms, std::size_t min_size) {
  CommunityReport report;
  report.min_size = std::max<std::size_t>(2, min_size);
  const auto wcc = weighted_clustering_all(g);
  for (std::uint32_t c = 0; c < p.community_count(); ++c) {
    const auto& members = p.members[c];
    if (members.size() < report.min_size) {
      ++report.skipped_small;
      continue;
    }
    std::vector<const RhythmVector*> rs;
    double wsum = 0;
    for (const auto i : members) {
      const auto* r = rhythms.find(g.node(i), g.week());
      if (!r) {
        throw Error(Errc::MissingRhythm, "community member '" + g.node(i).str() + "' has no rhythm in week " +
                                             std::to_string(g.week().value));
      }
      rs.push_back(r);
      wsum += wcc[i];
    }
    report.stats.push_back(
        {c, members.size(), mean_pairwise_similarity(rs), wsum / static_cast<double>(members.size())});
  }
  return report;
}

}  // namespace socrhythm
