#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "socrhythm/binning.hpp"
#include "socrhythm/rhythm.hpp"
#include "socrhythm/socialnet.hpp"

namespace socrhythm {

enum class DistanceMode { Weighted, Hops };
const char* to_string(DistanceMode m);

/// Shortest-path distances from one source. Unreachable nodes hold +inf.
struct DistanceField {
  NodeIndex source = 0;
  std::vector<double> distance;      // sum of 1/w (weighted) or hop count
  std::vector<std::uint32_t> hops;   // edges on the chosen path

  bool reachable(NodeIndex v) const { return distance[v] != std::numeric_limits<double>::infinity(); }
};

/// Dijkstra with edge length 1/w. Throws UnknownNode.
DistanceField weighted_sssp(const WeightedGraph& g, const UserId& source);
DistanceField weighted_sssp(const WeightedGraph& g, NodeIndex source);
/// Breadth-first hop counts. Throws UnknownNode.
DistanceField hop_sssp(const WeightedGraph& g, const UserId& source);
DistanceField hop_sssp(const WeightedGraph& g, NodeIndex source);

struct DistanceOptions {
  DistanceMode mode = DistanceMode::Weighted;
  std::size_t source_sample = 500;
  /// Graphs below this size enumerate every source.
  std::size_t exact_below = 2000;
  std::uint64_t seed = 0;
};

/// Sources used for a sampled analysis: all nodes when the graph is smaller
/// than `exact_below`, otherwise `source_sample` distinct nodes.
std::vector<NodeIndex> sample_sources(const WeightedGraph& g, const DistanceOptions& opt);

std::vector<double> default_distance_edges(DistanceMode mode, std::size_t max_hops = 12);

struct DistanceCurve {
  BinnedCurve curve;
  double baseline_mean = 0;
  double baseline_sd = 0;
  std::size_t baseline_count = 0;
};

/// Appends (distance, similarity) for every reachable (source, target) pair
/// whose users both have a rhythm in the graph's week.
void collect_distance_similarities(const WeightedGraph& g, const RhythmTable& rhythms,
                                   const DistanceOptions& opt, std::vector<double>& distances,
                                   std::vector<double>& similarities);

/// Similarity of (source, target) pairs binned by their distance.
DistanceCurve similarity_vs_distance(const WeightedGraph& g, const RhythmTable& rhythms,
                                     const DistanceOptions& opt, std::span<const double> edges,
                                     std::size_t baseline_pairs = 20000);

enum class ReachDenominator { AllPairs, ReachablePairs };

/// Fraction of (source, other node) pairs at distance <= d, averaged over
/// sampled sources.
double reach_fraction(const WeightedGraph& g, double d, const DistanceOptions& opt,
                      ReachDenominator denominator = ReachDenominator::AllPairs);

/// Largest populated bin center whose mean similarity is at least
/// factor * baseline.
std::optional<double> decay_threshold_distance(const BinnedCurve& curve, double baseline, double factor = 1.10);

}  // namespace socrhythm
