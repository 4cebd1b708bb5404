#pragma once

#include <cstdint>
#include <vector>

#include "socrhythm/rhythm.hpp"
#include "socrhythm/socialnet.hpp"

namespace socrhythm {

/// Community assignment over the node indices of one graph. Ids are dense
/// and numbered in order of each community's smallest node index.
struct Partition {
  std::vector<std::uint32_t> community;           // per node
  std::vector<std::vector<NodeIndex>> members;    // per community, ascending

  std::size_t community_count() const noexcept { return members.size(); }
  static Partition from_labels(const std::vector<std::uint32_t>& labels);
};

/// Weighted Newman modularity of `p` on `g`.
double modularity(const WeightedGraph& g, const Partition& p);

/// Multi-level greedy modularity maximization (Louvain). Node visiting
/// order is shuffled from `seed`; output is deterministic given the seed.
Partition detect_communities(const WeightedGraph& g, std::uint64_t seed);

/// Clemente-Grassi coefficient:
///   C_i = sum_{j != k} (w_ij + w_ik)/2 a_ij a_ik a_jk / (s_i (d_i - 1))
/// over ordered neighbour pairs; 0 when d_i <= 1.
double weighted_clustering_coefficient(const WeightedGraph& g, NodeIndex i);
double weighted_clustering_coefficient(const WeightedGraph& g, const UserId& user);
std::vector<double> weighted_clustering_all(const WeightedGraph& g);

struct CommunityStats {
  std::uint32_t community = 0;
  std::size_t size = 0;
  double mean_similarity = 0;  // over all unordered member pairs
  double mean_wcc = 0;
};

struct CommunityReport {
  std::vector<CommunityStats> stats;
  std::size_t skipped_small = 0;
  std::size_t min_size = 3;
};

/// Mean member similarity from (|sum r|^2 - n) / (n (n - 1)), valid for unit
/// vectors.
double mean_pairwise_similarity(const std::vector<const RhythmVector*>& members);

CommunityReport community_similarity_vs_clustering(const WeightedGraph& g, const Partition& p,
                                                   const RhythmTable& rhythms, std::size_t min_size = 3);

}  // namespace socrhythm
