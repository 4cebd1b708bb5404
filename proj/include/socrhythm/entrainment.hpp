#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "socrhythm/binning.hpp"
#include "socrhythm/rhythm.hpp"
#include "socrhythm/socialnet.hpp"
#include "socrhythm/stats.hpp"

namespace socrhythm {

using stats::WelchResult;
using stats::welch_t;

/// Default similarity axis: width 0.05 over [-1, 1].
std::vector<double> similarity_edges(double width = 0.05);

struct EdgeSimilarity {
  double log10_weight = 0;
  double similarity = 0;
};

/// Similarity of every edge's endpoints in the graph's week. Throws
/// MissingRhythm naming the endpoints that have no rhythm.
std::vector<EdgeSimilarity> edge_similarities(const WeightedGraph& g, const RhythmTable& rhythms);

struct WeightCurve {
  BinnedCurve curve;  // x = log10 w
  double baseline_mean = 0;
  double baseline_sd = 0;
  std::size_t baseline_count = 0;
  std::vector<EdgeSimilarity> edges;
};

/// Random-pair similarities among nodes of `g` that have a rhythm in g's week.
std::vector<double> baseline_similarities(const WeightedGraph& g, const RhythmTable& rhythms,
                                          std::size_t pairs, std::uint64_t seed);

WeightCurve similarity_vs_weight_curve(const WeightedGraph& g, const RhythmTable& rhythms,
                                       std::span<const double> log10w_edges, std::size_t baseline_pairs,
                                       std::uint64_t seed);

struct PairObservation {
  UserId a;
  UserId b;
  WeekIndex week_before;
  WeekIndex week_after;
  double sim_before = 0;
  double sim_after = 0;
  double weight_after = 0;
  bool newly_connected = false;
};

/// Pairs present in g_curr and absent in g_prev whose users have rhythms in
/// both weeks. Throws NonAdjacentWeeks.
std::vector<PairObservation> new_edges(const WeightedGraph& g_prev, const WeightedGraph& g_curr,
                                       const RhythmTable& rhythms);

/// Null counterpart of new_edges: the edges of null_reattach(g_curr), scored
/// in both weeks.
std::vector<PairObservation> random_combination_pairs(const WeightedGraph& g_prev,
                                                      const WeightedGraph& g_curr,
                                                      const RhythmTable& rhythms, std::uint64_t seed);

/// sim_after grouped by sim_before bin.
BinnedCurve change_curve(std::span<const PairObservation> obs, std::span<const double> edges);
BinnedCurve change_curve(std::span<const PairObservation> obs);

struct SimilarityDistributions {
  Histogram before;
  Histogram after;
  Histogram null_after;
  double mean_before = 0;
  double mean_after = 0;
  double mean_null = 0;
};

SimilarityDistributions similarity_distributions(std::span<const PairObservation> new_pairs,
                                                 std::span<const PairObservation> null_pairs,
                                                 double width = 0.05);

/// Cosine of one user's rhythms in consecutive weeks. Throws UserMismatch
/// when the rhythms belong to different users, NonAdjacentWeeks otherwise
/// when the weeks are not consecutive.
double intrapersonal_similarity(const UserId& user, const RhythmVector& before, const RhythmVector& after);

struct IntrapersonalSamples {
  std::vector<double> new_edge_users;
  std::vector<double> random_users;
};

/// Stability of endpoints of new edges against an equally sized uniform
/// sample of users active in both weeks. With `min_log10_weight`, only new
/// edges with log10 w above it count.
IntrapersonalSamples intrapersonal_samples(const WeightedGraph& g_prev, const WeightedGraph& g_curr,
                                           const RhythmTable& rhythms, std::uint64_t seed,
                                           std::optional<double> min_log10_weight = std::nullopt);

enum class TriadCondition { StrongEdge, WeakEdge, Unconnected };
inline constexpr std::array<TriadCondition, 3> kTriadConditions = {
    TriadCondition::StrongEdge, TriadCondition::WeakEdge, TriadCondition::Unconnected};
const char* to_string(TriadCondition c);

struct TriadObservation {
  UserId a;
  UserId b;
  UserId c;
  TriadCondition bc_condition = TriadCondition::Unconnected;
  WeekIndex week_before;
  double ac_before = 0;
  double ac_after = 0;
  double bc_before = 0;
  double bc_after = 0;
};

struct TriadExtraction {
  std::vector<TriadObservation> triads;
  std::size_t skipped_missing_rhythm = 0;
};

/// For each new edge {A, B} (both orientations) and each C adjacent to A in
/// g_prev, one observation; B-C is classified on g_prev. Throws
/// NonAdjacentWeeks.
TriadExtraction triad_extract(const WeightedGraph& g_prev, const WeightedGraph& g_curr,
                              const RhythmTable& rhythms, double threshold_log10 = kStrongLog10Threshold);

struct TriadConditionSummary {
  BinnedCurve ac_curve;
  BinnedCurve bc_curve;
  std::vector<double> ac_changes;  // after - before
  std::vector<double> bc_changes;
};

std::map<TriadCondition, TriadConditionSummary> triad_change_summary(std::span<const TriadObservation> triads,
                                                                    std::span<const double> edges);
std::map<TriadCondition, TriadConditionSummary> triad_change_summary(std::span<const TriadObservation> triads);

}  // namespace socrhythm
