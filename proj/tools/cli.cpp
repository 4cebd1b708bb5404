#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "manifest.hpp"
#include "socrhythm/csv.hpp"
#include "socrhythm/distance.hpp"
#include "socrhythm/entrainment.hpp"
#include "socrhythm/eventlog.hpp"
#include "socrhythm/oscillsim.hpp"
#include "socrhythm/rhythm.hpp"
#include "socrhythm/socialnet.hpp"
#include "socrhythm/stats.hpp"
#include "socrhythm/structure.hpp"
#include "svg.hpp"

#ifndef SOCRHYTHM_VERSION
#define SOCRHYTHM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace socrhythm::cli {

namespace {

struct Common {
  std::optional<EpochSeconds> origin;
  int utc_offset_h = 9;
  bool utc_offset_given = false;  // simulate only: otherwise the config decides
  std::optional<std::uint64_t> seed;
  fs::path out = ".";
  double threshold = kStrongLog10Threshold;

  WeekClock clock() const { return WeekClock{origin.value_or(0), utc_offset_h}; }
  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
};

std::string num(double v) { return csv::format_double(v); }

/// Collects outputs of one command: written atomically and digested.
class Sink {
 public:
  Sink(fs::path dir, Manifest& m) : dir_(std::move(dir)), m_(m) { fs::create_directories(dir_); }
  void put(const std::string& name, const std::string& content) {
    csv::write_file_atomic(dir_ / name, content);
    m_.add_output(name, content);
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  Manifest& m_;
};

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw Error(Errc::Io, std::string(what) + " not found: " + p.string());
}

ParseResult read_events(const fs::path& path, Manifest& m) {
  require_file(path, "event file");
  m.add_input(path);
  auto parsed = parse_events_file(path.string());
  for (const auto& d : parsed.diagnostics) {
    std::cerr << path.string() << ':' << d.line << ": " << d.message << '\n';
  }
  if (!parsed.diagnostics.empty()) std::cerr << parsed.diagnostics.size() << " malformed line(s) skipped\n";
  m.set_warnings(parsed.diagnostics.size());
  return parsed;
}

RhythmTable load_rhythms(const fs::path& path, Manifest& m) {
  require_file(path, "rhythm table");
  m.add_input(path);
  std::ifstream in(path);
  return read_rhythms(in);
}

std::map<std::int64_t, WeightedGraph> load_graphs(const fs::path& path, Manifest& m) {
  require_file(path, "network table");
  m.add_input(path);
  std::ifstream in(path);
  return read_graphs(in);
}

void write_curve_rows(std::ostream& o, const std::string& prefix, const BinnedCurve& c) {
  for (std::size_t i = 0; i < c.bins.size(); ++i) {
    const auto& b = c.bins[i];
    o << prefix << num(b.lo) << ',' << num(b.hi) << ',' << num(c.center(i)) << ',' << b.count << ',' << num(b.mean)
      << ',' << num(b.sd) << '\n';
  }
}

void write_test_row(std::ostream& o, const std::string& name, std::span<const double> x, std::span<const double> y) {
  o << name << ',' << x.size() << ',' << y.size() << ',';
  if (x.size() < 2 || y.size() < 2) {
    o << num(x.empty() ? NAN : stats::mean(x)) << ',' << num(y.empty() ? NAN : stats::mean(y)) << ",nan,nan,nan,nan\n";
    return;
  }
  try {
    const auto r = stats::welch_t(x, y);
    o << num(stats::mean(x)) << ',' << num(stats::mean(y)) << ',' << num(r.mean_difference) << ',' << num(r.t) << ','
      << num(r.dof) << ',' << num(r.p) << '\n';
  } catch (const Error&) {
    o << num(stats::mean(x)) << ',' << num(stats::mean(y)) << ",nan,nan,nan,nan\n";
  }
}

constexpr const char* kTestHeader = "test,n_x,n_y,mean_x,mean_y,mean_difference,t,dof,p\n";

/// Lines appended to report.md by each analysis.
using Notes = std::vector<std::string>;

// ---------------------------------------------------------------- analyses

void analyze_edge_weight(const RhythmTable& rhythms, const std::map<std::int64_t, WeightedGraph>& graphs,
                         const Common& c, Sink& sink, Notes& notes) {
  const double theta = c.threshold;
  std::vector<double> x, y, base;
  for (const auto& [w, g] : graphs) {
    for (const auto& e : edge_similarities(g, rhythms)) {
      x.push_back(e.log10_weight);
      y.push_back(e.similarity);
    }
    const auto b = baseline_similarities(g, rhythms, 2000, derive_seed(c.seed_or(0), "baseline", w));
    base.insert(base.end(), b.begin(), b.end());
  }
  std::vector<double> edges;
  for (int k = -20; k <= 20; ++k) edges.push_back(theta + 0.2 * k);
  const auto curve = bin_by(x, y, edges);
  std::ostringstream t;
  t << "bin_lo,bin_hi,center,count,mean_similarity,sd\n";
  write_curve_rows(t, "", curve);
  sink.put("edge_weight.csv", t.str());

  std::vector<double> bx, by, ax, ay;
  for (std::size_t i = 0; i < curve.bins.size(); ++i) {
    const auto& b = curve.bins[i];
    if (b.count < 30) continue;
    if (b.hi <= theta + 1e-9) {
      bx.push_back(curve.center(i));
      by.push_back(b.mean);
    } else if (b.lo >= theta - 1e-9) {
      ax.push_back(curve.center(i));
      ay.push_back(b.mean);
    }
  }
  const double base_mean = base.empty() ? NAN : stats::mean(base);
  std::ostringstream s;
  s << "metric,value\n";
  std::size_t strong = 0;
  for (double lw : x) strong += lw > theta;
  s << "edges," << x.size() << "\nstrong_edges," << strong << "\nthreshold_log10w," << num(theta) << '\n';
  s << "baseline_mean," << num(base_mean) << "\nbaseline_sd," << num(stats::sample_sd(base)) << "\nbaseline_pairs,"
    << base.size() << '\n';
  if (bx.size() >= 3) {
    const auto slope = stats::ols_slope(bx, by);
    s << "below_threshold_slope," << num(slope.slope) << "\nbelow_threshold_slope_p," << num(slope.p) << '\n';
  }
  if (ax.size() >= 3) s << "above_threshold_spearman," << num(stats::spearman(ax, ay).rho) << '\n';
  sink.put("edge_weight_summary.csv", s.str());

  svg::Plot plot;
  plot.title = "Rhythm similarity by edge weight";
  plot.x_label = "log10 weekly dwell seconds";
  plot.y_label = "similarity";
  plot.series.push_back(svg::from_curve(curve, "edges"));
  if (std::isfinite(base_mean)) plot.baseline = base_mean;
  plot.baseline_label = "random pairs";
  plot.vertical = theta;
  sink.put("edge_weight.svg", svg::render(plot));
  notes.push_back("edge-weight: " + std::to_string(x.size()) + " edges, " + std::to_string(strong) +
                  " strong; random-pair baseline " + num(base_mean));
}

void analyze_entrainment(const RhythmTable& rhythms, const std::map<std::int64_t, WeightedGraph>& graphs,
                         const Common& c, Sink& sink, Notes& notes) {
  const double theta = c.threshold;
  const std::uint64_t seed = c.seed_or(0);
  std::vector<PairObservation> fresh, null;
  std::vector<double> stable_new, stable_random, stable_new_strong, stable_random_strong;
  for (const auto& [w, g] : graphs) {
    const auto prev = graphs.find(w - 1);
    if (prev == graphs.end()) continue;
    auto a = new_edges(prev->second, g, rhythms);
    auto b = random_combination_pairs(prev->second, g, rhythms, derive_seed(seed, "null", w));
    fresh.insert(fresh.end(), a.begin(), a.end());
    null.insert(null.end(), b.begin(), b.end());
    const auto all = intrapersonal_samples(prev->second, g, rhythms, derive_seed(seed, "intra", w));
    stable_new.insert(stable_new.end(), all.new_edge_users.begin(), all.new_edge_users.end());
    stable_random.insert(stable_random.end(), all.random_users.begin(), all.random_users.end());
    const auto strong = intrapersonal_samples(prev->second, g, rhythms, derive_seed(seed, "intra", w), theta);
    stable_new_strong.insert(stable_new_strong.end(), strong.new_edge_users.begin(), strong.new_edge_users.end());
    stable_random_strong.insert(stable_random_strong.end(), strong.random_users.begin(), strong.random_users.end());
  }
  const auto strong_only = [&](const std::vector<PairObservation>& v) {
    std::vector<PairObservation> out;
    for (const auto& o : v) {
      if (std::log10(o.weight_after) > theta) out.push_back(o);
    }
    return out;
  };
  const auto deltas = [](const std::vector<PairObservation>& v) {
    std::vector<double> out;
    for (const auto& o : v) out.push_back(o.sim_after - o.sim_before);
    return out;
  };
  const auto afters = [](const std::vector<PairObservation>& v) {
    std::vector<double> out;
    for (const auto& o : v) out.push_back(o.sim_after);
    return out;
  };
  const auto fresh_strong = strong_only(fresh);
  const auto null_strong = strong_only(null);

  std::ostringstream t;
  t << "group,bin_lo,bin_hi,center,count,mean_after,sd\n";
  write_curve_rows(t, "new,", change_curve(fresh));
  write_curve_rows(t, "null,", change_curve(null));
  write_curve_rows(t, "new_strong,", change_curve(fresh_strong));
  write_curve_rows(t, "null_strong,", change_curve(null_strong));
  sink.put("entrainment_change.csv", t.str());

  const auto dist = similarity_distributions(fresh, null);
  std::ostringstream d;
  d << "bin_lo,bin_hi,before,after,null_after\n";
  for (std::size_t i = 0; i < dist.before.counts.size(); ++i) {
    d << num(dist.before.edges[i]) << ',' << num(dist.before.edges[i + 1]) << ',' << dist.before.counts[i] << ','
      << dist.after.counts[i] << ',' << dist.null_after.counts[i] << '\n';
  }
  sink.put("entrainment_distributions.csv", d.str());

  std::ostringstream s;
  s << kTestHeader;
  const auto dn = deltas(fresh), dnull = deltas(null), dns = deltas(fresh_strong), dnulls = deltas(null_strong);
  write_test_row(s, "change_new_vs_null", dn, dnull);
  write_test_row(s, "change_new_vs_null_strong", dns, dnulls);
  const auto an = afters(fresh), anull = afters(null);
  write_test_row(s, "after_new_vs_null", an, anull);
  write_test_row(s, "intrapersonal_new_vs_random", stable_new, stable_random);
  write_test_row(s, "intrapersonal_new_vs_random_strong", stable_new_strong, stable_random_strong);
  sink.put("entrainment_tests.csv", s.str());

  svg::Plot plot;
  plot.title = "Similarity after connecting vs before";
  plot.x_label = "similarity before";
  plot.y_label = "similarity after";
  plot.series.push_back(svg::from_curve(change_curve(fresh), "new edges"));
  plot.series.push_back(svg::from_curve(change_curve(null), "random combination", "#c0392b"));
  sink.put("entrainment.svg", svg::render(plot));
  notes.push_back("entrainment: " + std::to_string(fresh.size()) + " new pairs (" +
                  std::to_string(fresh_strong.size()) + " strong), mean change " +
                  num(dn.empty() ? NAN : stats::mean(dn)) + " vs null " + num(dnull.empty() ? NAN : stats::mean(dnull)));
}

void analyze_triads(const RhythmTable& rhythms, const std::map<std::int64_t, WeightedGraph>& graphs, const Common& c,
                    Sink& sink, Notes& notes) {
  std::vector<TriadObservation> triads;
  std::size_t skipped = 0;
  for (const auto& [w, g] : graphs) {
    const auto prev = graphs.find(w - 1);
    if (prev == graphs.end()) continue;
    auto ex = triad_extract(prev->second, g, rhythms, c.threshold);
    skipped += ex.skipped_missing_rhythm;
    triads.insert(triads.end(), ex.triads.begin(), ex.triads.end());
  }
  const auto summary = triad_change_summary(triads);
  std::ostringstream s;
  s << "condition,n,ac_change_mean,ac_change_sd,bc_change_mean,bc_change_sd\n";
  for (const auto cond : kTriadConditions) {
    const auto& sm = summary.at(cond);
    const auto m = [](const std::vector<double>& v) { return v.empty() ? NAN : stats::mean(v); };
    s << to_string(cond) << ',' << sm.bc_changes.size() << ',' << num(m(sm.ac_changes)) << ','
      << num(stats::sample_sd(sm.ac_changes)) << ',' << num(m(sm.bc_changes)) << ','
      << num(stats::sample_sd(sm.bc_changes)) << '\n';
  }
  sink.put("triads_summary.csv", s.str());

  std::ostringstream t;
  t << "condition,pair,bin_lo,bin_hi,center,count,mean_after,sd\n";
  for (const auto cond : kTriadConditions) {
    write_curve_rows(t, std::string(to_string(cond)) + ",ac,", summary.at(cond).ac_curve);
    write_curve_rows(t, std::string(to_string(cond)) + ",bc,", summary.at(cond).bc_curve);
  }
  sink.put("triads_curves.csv", t.str());

  std::ostringstream w;
  w << kTestHeader;
  const auto& strong = summary.at(TriadCondition::StrongEdge);
  const auto& weak = summary.at(TriadCondition::WeakEdge);
  const auto& open = summary.at(TriadCondition::Unconnected);
  write_test_row(w, "bc_strong_vs_unconnected", strong.bc_changes, open.bc_changes);
  write_test_row(w, "ac_strong_vs_unconnected", strong.ac_changes, open.ac_changes);
  write_test_row(w, "bc_weak_vs_unconnected", weak.bc_changes, open.bc_changes);
  write_test_row(w, "ac_weak_vs_unconnected", weak.ac_changes, open.ac_changes);
  sink.put("triads_tests.csv", w.str());

  svg::Plot plot;
  plot.title = "B-C similarity after A-B connects";
  plot.x_label = "B-C similarity before";
  plot.y_label = "B-C similarity after";
  plot.series.push_back(svg::from_curve(strong.bc_curve, "B-C strong", "#1f4e9c"));
  plot.series.push_back(svg::from_curve(weak.bc_curve, "B-C weak", "#e67e22"));
  plot.series.push_back(svg::from_curve(open.bc_curve, "B-C unconnected", "#7f8c8d"));
  sink.put("triads.svg", svg::render(plot));
  notes.push_back("triads: " + std::to_string(triads.size()) + " observations (strong " +
                  std::to_string(strong.bc_changes.size()) + ", weak " + std::to_string(weak.bc_changes.size()) +
                  ", unconnected " + std::to_string(open.bc_changes.size()) + "), " + std::to_string(skipped) +
                  " skipped for missing rhythms");
}

void analyze_communities(const RhythmTable& rhythms, const std::map<std::int64_t, WeightedGraph>& graphs,
                         const Common& c, Sink& sink, Notes& notes) {
  std::ostringstream t, members;
  t << "week,community_id,size,mean_similarity,mean_wcc\n";
  members << "week,community_id,user\n";
  std::vector<double> sim, wcc, q;
  std::size_t small = 0;
  for (const auto& [w, g] : graphs) {
    const auto p = detect_communities(g, derive_seed(c.seed_or(0), "louvain", static_cast<std::uint64_t>(w)));
    q.push_back(modularity(g, p));
    for (std::uint32_t k = 0; k < p.community_count(); ++k) {
      for (const auto v : p.members[k]) members << w << ',' << k << ',' << g.node(v).str() << '\n';
    }
    const auto report = community_similarity_vs_clustering(g, p, rhythms);
    small += report.skipped_small;
    for (const auto& st : report.stats) {
      t << w << ',' << st.community << ',' << st.size << ',' << num(st.mean_similarity) << ',' << num(st.mean_wcc)
        << '\n';
      sim.push_back(st.mean_similarity);
      wcc.push_back(st.mean_wcc);
    }
  }
  sink.put("communities.csv", t.str());
  sink.put("community_members.csv", members.str());
  std::ostringstream s;
  s << "metric,value\ncommunities," << sim.size() << "\nskipped_small," << small << "\nmean_modularity,"
    << num(q.empty() ? NAN : stats::mean(q)) << '\n';
  std::string rho = "nan";
  if (sim.size() >= 3) {
    const auto r = stats::spearman(wcc, sim);
    rho = num(r.rho);
    s << "spearman_rho," << rho << "\nspearman_p," << num(r.p) << '\n';
  }
  sink.put("communities_summary.csv", s.str());

  svg::Plot plot;
  plot.title = "Community similarity by clustering";
  plot.x_label = "mean weighted clustering coefficient";
  plot.y_label = "mean member similarity";
  const auto edges = uniform_edges(0, 1, 0.05);
  plot.series.push_back(svg::from_curve(bin_by(wcc, sim, edges), "communities"));
  sink.put("communities.svg", svg::render(plot));
  notes.push_back("communities: " + std::to_string(sim.size()) + " with >= 3 members, spearman " + rho);
}

void analyze_distance(const RhythmTable& rhythms, const std::map<std::int64_t, WeightedGraph>& graphs,
                      const Common& c, DistanceMode mode, std::size_t sources, Sink& sink, Notes& notes) {
  const auto edges = default_distance_edges(mode);
  const bool weighted = mode == DistanceMode::Weighted;
  std::vector<double> x, y, sx, sy, base;
  for (const auto& [w, g] : graphs) {
    DistanceOptions opt;
    opt.mode = mode;
    opt.source_sample = sources;
    opt.seed = derive_seed(c.seed_or(0), "sources", static_cast<std::uint64_t>(w));
    collect_distance_similarities(g, rhythms, opt, x, y);
    if (weighted) collect_distance_similarities(strong_edge_subgraph(g, c.threshold), rhythms, opt, sx, sy);
    const auto b = baseline_similarities(g, rhythms, 2000, derive_seed(c.seed_or(0), "baseline", w));
    base.insert(base.end(), b.begin(), b.end());
  }
  const auto full = bin_by(x, y, edges, weighted);
  const auto strong = bin_by(sx, sy, edges, weighted);
  std::ostringstream t;
  t << "graph,bin_lo,bin_hi,center,count,mean_similarity,sd\n";
  write_curve_rows(t, "full,", full);
  if (weighted) write_curve_rows(t, "strong,", strong);
  const std::string suffix = weighted ? "" : "_hops";
  sink.put("distance" + suffix + "_curve.csv", t.str());

  const double baseline = base.empty() ? NAN : stats::mean(base);
  const double decay = std::isfinite(baseline) ? decay_threshold_distance(full, baseline).value_or(NAN) : NAN;
  std::ostringstream r;
  r << "week,mode,baseline_mean,decay_distance,reach_all_pairs,reach_reachable_pairs\n";
  for (const auto& [w, g] : graphs) {
    DistanceOptions opt;
    opt.mode = mode;
    opt.source_sample = sources;
    opt.seed = derive_seed(c.seed_or(0), "sources", static_cast<std::uint64_t>(w));
    r << w << ',' << to_string(mode) << ',' << num(baseline) << ',' << num(decay) << ',';
    if (std::isfinite(decay)) {
      r << num(reach_fraction(g, decay, opt, ReachDenominator::AllPairs)) << ','
        << num(reach_fraction(g, decay, opt, ReachDenominator::ReachablePairs)) << '\n';
    } else {
      r << "nan,nan\n";
    }
  }
  sink.put("distance" + suffix + "_reach.csv", r.str());

  svg::Plot plot;
  plot.title = weighted ? "Similarity by weighted distance" : "Similarity by hop distance";
  plot.x_label = weighted ? "distance (sum of 1/w)" : "hops";
  plot.y_label = "similarity";
  plot.log_x = weighted;
  plot.series.push_back(svg::from_curve(full, "all edges"));
  if (weighted) plot.series.push_back(svg::from_curve(strong, "strong edges only", "#c0392b"));
  if (std::isfinite(baseline)) plot.baseline = baseline;
  plot.baseline_label = "random pairs";
  sink.put("distance" + suffix + ".svg", svg::render(plot));
  notes.push_back(std::string("distance (") + to_string(mode) + "): baseline " + num(baseline) +
                  ", decay distance " + num(decay));
}

// ---------------------------------------------------------------- commands

std::string rhythm_outputs(const ParseResult& parsed, const WeekClock& clock, std::optional<std::int64_t> weeks,
                           Sink& sink, Manifest& m, RhythmTable* keep = nullptr) {
  StageTimer timer(m, "rhythms");
  const std::int64_t n = weeks.value_or(week_span(parsed.events, clock));
  auto ex = extract_rhythms(parsed.events, clock, n);
  std::ostringstream r;
  write_rhythms(r, ex.table);
  sink.put("rhythms.csv", r.str());
  std::ostringstream s;
  s << "week,user,reason\n";
  for (const auto& k : ex.skipped) s << k.week.value << ',' << k.user.str() << ',' << k.reason << '\n';
  sink.put("skipped.csv", s.str());
  const auto line = "rhythms: " + std::to_string(ex.table.size()) + " user-weeks, " +
                    std::to_string(ex.skipped.size()) + " skipped";
  if (keep) *keep = std::move(ex.table);
  return line;
}

std::string network_outputs(const ParseResult& parsed, const Common& c, std::optional<std::int64_t> weeks, bool with_null,
                            Sink& sink, Manifest& m, std::map<std::int64_t, WeightedGraph>* keep = nullptr) {
  StageTimer timer(m, "network");
  const auto clock = c.clock();
  const std::int64_t n = weeks.value_or(week_span(parsed.events, clock));
  std::map<std::int64_t, WeightedGraph> graphs;
  for (std::int64_t w = 0; w < n; ++w) graphs.emplace(w, build_week_network(parsed.events, WeekIndex{w}, clock));
  std::ostringstream g, s, nl;
  s << "week,nodes,edges,strong_edges,total_weight_s,degree_exponent\n";
  bool header = true;
  for (const auto& [w, graph] : graphs) {
    write_graph(g, graph, header);
    if (with_null) write_graph(nl, null_reattach(graph, derive_seed(c.seed_or(0), "null", w)), header);
    header = false;
    std::size_t strong = 0;
    for (const auto& e : graph.edges()) strong += edge_strength_class(e.weight, c.threshold) == EdgeStrength::Strong;
    double alpha = NAN;
    try {
      alpha = degree_powerlaw_exponent(graph);
    } catch (const Error&) {
    }
    s << w << ',' << graph.node_count() << ',' << graph.edge_count() << ',' << strong << ','
      << num(graph.total_weight()) << ',' << num(alpha) << '\n';
  }
  sink.put("network.csv", g.str());
  sink.put("network_summary.csv", s.str());
  if (with_null) sink.put("null_network.csv", nl.str());
  std::size_t edges = 0;
  for (const auto& [w, graph] : graphs) edges += graph.edge_count();
  if (keep) *keep = std::move(graphs);
  return "network: " + std::to_string(n) + " weeks, " + std::to_string(edges) + " edges";
}

const std::vector<std::string> kKinds = {"edge-weight", "entrainment", "triads", "communities", "distance"};

void run_kind(const std::string& kind, const RhythmTable& rhythms, const std::map<std::int64_t, WeightedGraph>& graphs,
              const Common& c, DistanceMode mode, std::size_t sources, Sink& sink, Manifest& m, Notes& notes) {
  StageTimer timer(m, kind);
  if (kind == "edge-weight") analyze_edge_weight(rhythms, graphs, c, sink, notes);
  if (kind == "entrainment") analyze_entrainment(rhythms, graphs, c, sink, notes);
  if (kind == "triads") analyze_triads(rhythms, graphs, c, sink, notes);
  if (kind == "communities") analyze_communities(rhythms, graphs, c, sink, notes);
  if (kind == "distance") analyze_distance(rhythms, graphs, c, mode, sources, sink, notes);
}

CLI::Option* add_common(CLI::App& app, Common& c) {
  app.add_option("--origin", c.origin, "Epoch second of local midnight starting week 0 (default 0)");
  auto* utc = app.add_option("--utc-offset-h", c.utc_offset_h, "UTC offset of the local clock in hours")->default_val(9);
  app.add_option("--seed", c.seed, "Seed for randomized steps");
  app.add_option("--out", c.out, "Output directory")->default_val(".");
  app.add_option("--threshold-log10w", c.threshold, "Strong-edge threshold on log10 weekly seconds")
      ->default_val(kStrongLog10Threshold);
  return utc;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Online social rhythm analysis and coupled-oscillator simulation", "socrhythm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SOCRHYTHM_VERSION);

  Common c;
  fs::path config_path, events_path, rhythms_path, network_path;
  std::optional<std::int64_t> weeks;
  std::string kind, mode_name = "weighted";
  std::size_t sources = 500;
  bool with_null = false;

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic event log with ground truth");
  simulate->add_option("--config", config_path, "JSON config (see docs/simconfig.schema.json)")->required();
  auto* simulate_utc = add_common(*simulate, c);

  auto* rhythms = app.add_subcommand("rhythms", "Extract weekly rhythm vectors from an event log");
  rhythms->add_option("--events", events_path, "Event CSV")->required();
  rhythms->add_option("--weeks", weeks, "Number of weeks (default: span of the log)");
  add_common(*rhythms, c);

  auto* network = app.add_subcommand("network", "Build weekly weighted networks from an event log");
  network->add_option("--events", events_path, "Event CSV")->required();
  network->add_option("--weeks", weeks, "Number of weeks (default: span of the log)");
  network->add_flag("--null", with_null, "Also write a random-combination network per week");
  add_common(*network, c);

  auto* analyze = app.add_subcommand("analyze", "Run one analysis over rhythm and network tables");
  analyze->add_option("kind", kind, "edge-weight | entrainment | triads | communities | distance")->required();
  analyze->add_option("--rhythms", rhythms_path, "Rhythm table (default <out>/rhythms.csv)");
  analyze->add_option("--network", network_path, "Network table (default <out>/network.csv)");
  analyze->add_option("--mode", mode_name, "distance: weighted | hops")->default_val("weighted");
  analyze->add_option("--sources", sources, "distance: sampled sources per week")->default_val(500);
  add_common(*analyze, c);

  auto* report = app.add_subcommand("report", "Event log to rhythms, networks, every analysis and report.md");
  report->add_option("--events", events_path, "Event CSV")->required();
  report->add_option("--weeks", weeks, "Number of weeks (default: span of the log)");
  report->add_option("--sources", sources, "distance: sampled sources per week")->default_val(500);
  add_common(*report, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto sub = app.get_subcommands().front();
  c.utc_offset_given = simulate_utc->count() > 0;
  Manifest manifest(sub->get_name(), args);
  try {
    if (sub == analyze && std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end()) {
      std::cerr << "unknown analysis kind '" << kind << "'\n";
      return kUsage;
    }
    if (mode_name != "weighted" && mode_name != "hops") {
      std::cerr << "--mode must be weighted or hops\n";
      return kUsage;
    }
    const DistanceMode mode = mode_name == "hops" ? DistanceMode::Hops : DistanceMode::Weighted;
    Sink sink(c.out, manifest);

    if (sub == simulate) {
      auto rc = load_config(config_path);
      manifest.add_input(config_path);
      if (c.seed) rc.sim.seed = *c.seed;
      if (c.origin) rc.sim.clock.origin = *c.origin;
      if (c.utc_offset_given) rc.sim.clock.utc_offset_hours = c.utc_offset_h;
      rc.sim.validate();
      manifest.set_seed(rc.sim.seed);
      const auto effective = to_json(rc).dump(2) + "\n";
      manifest.set_config(effective);
      SimulationOutput out;
      {
        StageTimer timer(manifest, "simulate");
        if (rc.triad) {
          auto t = *rc.triad;
          t.base = rc.sim;
          out = run_triad(t);
        } else {
          out = run_simulation(rc.sim);
        }
      }
      StageTimer timer(manifest, "write");
      std::ostringstream ev, ph, tr, sc;
      write_events(ev, out.events);
      write_phases(ph, out.phases);
      write_truth_graphs(tr, out.truth);
      write_schedule(sc, out.schedule);
      sink.put("events.csv", ev.str());
      sink.put("phases.csv", ph.str());
      sink.put("truth_graph.csv", tr.str());
      sink.put("schedule.csv", sc.str());
      sink.put("config.json", effective);
    } else if (sub == rhythms) {
      const auto parsed = read_events(events_path, manifest);
      rhythm_outputs(parsed, c.clock(), weeks, sink, manifest);
    } else if (sub == network) {
      const auto parsed = read_events(events_path, manifest);
      if (with_null || c.seed) manifest.set_seed(c.seed_or(0));
      network_outputs(parsed, c, weeks, with_null, sink, manifest);
    } else if (sub == analyze) {
      manifest.set_seed(c.seed_or(0));
      const auto r = load_rhythms(rhythms_path.empty() ? c.out / "rhythms.csv" : rhythms_path, manifest);
      const auto g = load_graphs(network_path.empty() ? c.out / "network.csv" : network_path, manifest);
      Notes notes;
      run_kind(kind, r, g, c, mode, sources, sink, manifest, notes);
      for (const auto& n : notes) std::cout << n << '\n';
    } else if (sub == report) {
      manifest.set_seed(c.seed_or(0));
      const auto parsed = read_events(events_path, manifest);
      Notes notes;
      RhythmTable r;
      std::map<std::int64_t, WeightedGraph> g;
      notes.push_back(rhythm_outputs(parsed, c.clock(), weeks, sink, manifest, &r));
      notes.push_back(network_outputs(parsed, c, weeks, false, sink, manifest, &g));
      for (const auto& k : kKinds) run_kind(k, r, g, c, DistanceMode::Weighted, sources, sink, manifest, notes);
      run_kind("distance", r, g, c, DistanceMode::Hops, sources, sink, manifest, notes);
      std::ostringstream md;
      md << "# socrhythm report\n\n";
      md << "- events: " << parsed.events.size() << " (" << parsed.diagnostics.size() << " malformed lines, "
         << parsed.self_visits_dropped << " self-visits dropped)\n";
      md << "- threshold log10 w: " << num(c.threshold) << "\n- seed: " << c.seed_or(0) << "\n";
      for (const auto& n : notes) md << "- " << n << '\n';
      md << "\nTables and plots are in this directory; see manifest.json for digests.\n";
      sink.put("report.md", md.str());
      std::cout << md.str();
    }
    manifest.write(c.out);
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::InvalidConfig ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace socrhythm::cli
