#include "socrhythm/entrainment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "socrhythm/random.hpp"

namespace socrhythm {

namespace {

void require_adjacent(const WeightedGraph& g_prev, const WeightedGraph& g_curr) {
  if (g_curr.week().value != g_prev.week().value + 1) {
    throw Error(Errc::NonAdjacentWeeks, "weeks " + std::to_string(g_prev.week().value) + " and " +
                                            std::to_string(g_curr.week().value) + " are not consecutive");
  }
}

// Rhythm per node for one week; null where missing.
std::vector<const RhythmVector*> rhythms_by_node(const WeightedGraph& g, const RhythmTable& rhythms,
                                                 WeekIndex week) {
  std::vector<const RhythmVector*> out(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i) out[i] = rhythms.find(g.node(i), week);
  return out;
}

}  // namespace

std::vector<double> similarity_edges(double width) { return uniform_edges(-1.0, 1.0, width); }

std::vector<EdgeSimilarity> edge_similarities(const WeightedGraph& g, const RhythmTable& rhythms) {
  const auto by_node = rhythms_by_node(g, rhythms, g.week());
  std::set<std::string> missing;
  std::vector<EdgeSimilarity> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    const auto* ra = by_node[e.a];
    const auto* rb = by_node[e.b];
    if (!ra) missing.insert(g.node(e.a).str());
    if (!rb) missing.insert(g.node(e.b).str());
    if (ra && rb) out.push_back({std::log10(e.weight), similarity(*ra, *rb)});
  }
  if (!missing.empty()) {
    std::string list;
    std::size_t shown = 0;
    for (const auto& m : missing) {
      if (shown++ == 10) {
        list += ", ...";
        break;
      }
      list += (list.empty() ? "" : ", ") + m;
    }
    throw Error(Errc::MissingRhythm, std::to_string(missing.size()) + " edge endpoint(s) without a rhythm in week " +
                                         std::to_string(g.week().value) + ": " + list);
  }
  return out;
}

std::vector<double> baseline_similarities(const WeightedGraph& g, const RhythmTable& rhythms,
                                          std::size_t pairs, std::uint64_t seed) {
  std::vector<const RhythmVector*> pool;
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (const auto* r = rhythms.find(g.node(i), g.week())) pool.push_back(r);
  }
  std::vector<double> out;
  if (pool.size() < 2) return out;
  out.reserve(pairs);
  for (const auto& [a, b] : random_pairs(pool.size(), pairs, seed)) out.push_back(similarity(*pool[a], *pool[b]));
  return out;
}

WeightCurve similarity_vs_weight_curve(const WeightedGraph& g, const RhythmTable& rhythms,
                                       std::span<const double> log10w_edges, std::size_t baseline_pairs,
                                       std::uint64_t seed) {
  WeightCurve out;
  out.edges = edge_similarities(g, rhythms);
  std::vector<double> x, y;
  for (const auto& e : out.edges) {
    x.push_back(e.log10_weight);
    y.push_back(e.similarity);
  }
  out.curve = bin_by(x, y, log10w_edges);
  if (g.edge_count() == 0) out.curve.bins.clear();
  const auto base = baseline_similarities(g, rhythms, baseline_pairs, seed);
  out.baseline_count = base.size();
  out.baseline_mean = base.empty() ? 0 : stats::mean(base);
  out.baseline_sd = stats::sample_sd(base);
  return out;
}

std::vector<PairObservation> new_edges(const WeightedGraph& g_prev, const WeightedGraph& g_curr,
                                       const RhythmTable& rhythms) {
  require_adjacent(g_prev, g_curr);
  const WeekIndex before = g_prev.week();
  const WeekIndex after = g_curr.week();
  std::vector<PairObservation> out;
  for (const auto& e : g_curr.edges()) {
    const auto& ua = g_curr.node(e.a);
    const auto& ub = g_curr.node(e.b);
    const auto pa = g_prev.index_of(ua);
    const auto pb = g_prev.index_of(ub);
    if (pa && pb && g_prev.has_edge(*pa, *pb)) continue;
    const auto* ra0 = rhythms.find(ua, before);
    const auto* rb0 = rhythms.find(ub, before);
    const auto* ra1 = rhythms.find(ua, after);
    const auto* rb1 = rhythms.find(ub, after);
    if (!ra0 || !rb0 || !ra1 || !rb1) continue;
    out.push_back({ua, ub, before, after, similarity(*ra0, *rb0), similarity(*ra1, *rb1), e.weight, true});
  }
  return out;
}

std::vector<PairObservation> random_combination_pairs(const WeightedGraph& g_prev,
                                                      const WeightedGraph& g_curr,
                                                      const RhythmTable& rhythms, std::uint64_t seed) {
  require_adjacent(g_prev, g_curr);
  const auto null_graph = null_reattach(g_curr, seed);
  const WeekIndex before = g_prev.week();
  const WeekIndex after = g_curr.week();
  std::vector<PairObservation> out;
  for (const auto& e : null_graph.edges()) {
    const auto& ua = null_graph.node(e.a);
    const auto& ub = null_graph.node(e.b);
    const auto* ra0 = rhythms.find(ua, before);
    const auto* rb0 = rhythms.find(ub, before);
    const auto* ra1 = rhythms.find(ua, after);
    const auto* rb1 = rhythms.find(ub, after);
    if (!ra0 || !rb0 || !ra1 || !rb1) continue;
    out.push_back({ua, ub, before, after, similarity(*ra0, *rb0), similarity(*ra1, *rb1), e.weight, false});
  }
  return out;
}

BinnedCurve change_curve(std::span<const PairObservation> obs, std::span<const double> edges) {
  std::vector<double> x, y;
  x.reserve(obs.size());
  y.reserve(obs.size());
  for (const auto& o : obs) {
    x.push_back(o.sim_before);
    y.push_back(o.sim_after);
  }
  return bin_by(x, y, edges);
}

BinnedCurve change_curve(std::span<const PairObservation> obs) {
  const auto edges = similarity_edges();
  return change_curve(obs, edges);
}

SimilarityDistributions similarity_distributions(std::span<const PairObservation> new_pairs,
                                                 std::span<const PairObservation> null_pairs, double width) {
  const auto edges = similarity_edges(width);
  std::vector<double> before, after, null_after;
  for (const auto& o : new_pairs) {
    before.push_back(o.sim_before);
    after.push_back(o.sim_after);
  }
  for (const auto& o : null_pairs) null_after.push_back(o.sim_after);
  SimilarityDistributions d;
  d.before = histogram(before, edges);
  d.after = histogram(after, edges);
  d.null_after = histogram(null_after, edges);
  d.mean_before = stats::mean(before);
  d.mean_after = stats::mean(after);
  d.mean_null = stats::mean(null_after);
  return d;
}

double intrapersonal_similarity(const UserId& user, const RhythmVector& before, const RhythmVector& after) {
  if (before.user != user || after.user != user) {
    throw Error(Errc::UserMismatch, "rhythms of '" + before.user.str() + "' and '" + after.user.str() +
                                        "' do not both belong to '" + user.str() + "'");
  }
  if (after.week.value != before.week.value + 1) {
    throw Error(Errc::NonAdjacentWeeks, "intrapersonal similarity needs consecutive weeks");
  }
  return similarity(before, after);
}

IntrapersonalSamples intrapersonal_samples(const WeightedGraph& g_prev, const WeightedGraph& g_curr,
                                           const RhythmTable& rhythms, std::uint64_t seed,
                                           std::optional<double> min_log10_weight) {
  require_adjacent(g_prev, g_curr);
  const WeekIndex before = g_prev.week();
  const WeekIndex after = g_curr.week();
  std::set<UserId> connected;
  for (const auto& o : new_edges(g_prev, g_curr, rhythms)) {
    if (min_log10_weight && !(std::log10(o.weight_after) > *min_log10_weight)) continue;
    connected.insert(o.a);
    connected.insert(o.b);
  }
  IntrapersonalSamples out;
  for (const auto& u : connected) {
    out.new_edge_users.push_back(
        intrapersonal_similarity(u, *rhythms.find(u, before), *rhythms.find(u, after)));
  }
  std::vector<UserId> active;
  for (const auto& u : rhythms.users_in_week(after)) {
    if (rhythms.contains(u, before)) active.push_back(u);
  }
  // Partial Fisher-Yates: a uniform sample without replacement.
  Rng rng(seed);
  const std::size_t want = std::min(active.size(), connected.size());
  for (std::size_t i = 0; i < want; ++i) {
    const auto j = i + uniform_index(rng, active.size() - i);
    std::swap(active[i], active[j]);
    const auto& u = active[i];
    out.random_users.push_back(intrapersonal_similarity(u, *rhythms.find(u, before), *rhythms.find(u, after)));
  }
  return out;
}

const char* to_string(TriadCondition c) {
  switch (c) {
    case TriadCondition::StrongEdge: return "strong";
    case TriadCondition::WeakEdge: return "weak";
    case TriadCondition::Unconnected: return "unconnected";
  }
  return "?";
}

TriadExtraction triad_extract(const WeightedGraph& g_prev, const WeightedGraph& g_curr,
                              const RhythmTable& rhythms, double threshold_log10) {
  require_adjacent(g_prev, g_curr);
  const WeekIndex before = g_prev.week();
  const WeekIndex after = g_curr.week();
  TriadExtraction out;

  const auto scan = [&](const UserId& a, const UserId& b) {
    const auto pa = g_prev.index_of(a);
    if (!pa) return;
    const auto pb = g_prev.index_of(b);
    for (const auto& nc : g_prev.neighbors(*pa)) {
      if (pb && nc.node == *pb) continue;
      const auto& c = g_prev.node(nc.node);
      TriadCondition cond = TriadCondition::Unconnected;
      if (pb) {
        if (const auto w = g_prev.weight(*pb, nc.node)) {
          cond = edge_strength_class(*w, threshold_log10) == EdgeStrength::Strong ? TriadCondition::StrongEdge
                                                                                  : TriadCondition::WeakEdge;
        }
      }
      const auto* ra0 = rhythms.find(a, before);
      const auto* rb0 = rhythms.find(b, before);
      const auto* rc0 = rhythms.find(c, before);
      const auto* ra1 = rhythms.find(a, after);
      const auto* rb1 = rhythms.find(b, after);
      const auto* rc1 = rhythms.find(c, after);
      if (!ra0 || !rb0 || !rc0 || !ra1 || !rb1 || !rc1) {
        ++out.skipped_missing_rhythm;
        continue;
      }
      out.triads.push_back({a, b, c, cond, before, similarity(*ra0, *rc0), similarity(*ra1, *rc1),
                            similarity(*rb0, *rc0), similarity(*rb1, *rc1)});
    }
  };

  for (const auto& e : g_curr.edges()) {
    const auto& ua = g_curr.node(e.a);
    const auto& ub = g_curr.node(e.b);
    const auto pa = g_prev.index_of(ua);
    const auto pb = g_prev.index_of(ub);
    if (pa && pb && g_prev.has_edge(*pa, *pb)) continue;
    scan(ua, ub);
    scan(ub, ua);
  }
  return out;
}

std::map<TriadCondition, TriadConditionSummary> triad_change_summary(std::span<const TriadObservation> triads,
                                                                    std::span<const double> edges) {
  std::map<TriadCondition, std::vector<const TriadObservation*>> groups;
  for (auto c : kTriadConditions) groups[c];
  for (const auto& t : triads) groups[t.bc_condition].push_back(&t);
  std::map<TriadCondition, TriadConditionSummary> out;
  for (const auto& [cond, members] : groups) {
    std::vector<double> acx, acy, bcx, bcy;
    TriadConditionSummary s;
    for (const auto* t : members) {
      acx.push_back(t->ac_before);
      acy.push_back(t->ac_after);
      bcx.push_back(t->bc_before);
      bcy.push_back(t->bc_after);
      s.ac_changes.push_back(t->ac_after - t->ac_before);
      s.bc_changes.push_back(t->bc_after - t->bc_before);
    }
    s.ac_curve = bin_by(acx, acy, edges);
    s.bc_curve = bin_by(bcx, bcy, edges);
    out.emplace(cond, std::move(s));
  }
  return out;
}

std::map<TriadCondition, TriadConditionSummary> triad_change_summary(std::span<const TriadObservation> triads) {
  const auto edges = similarity_edges();
  return triad_change_summary(triads, edges);
}

}  // namespace socrhythm
