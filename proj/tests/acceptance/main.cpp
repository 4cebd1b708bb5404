// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.
//   socrhythm_acceptance [--only N,M,...] [--triad-replicates N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "sim_criteria.hpp"
#include "socrhythm/csv.hpp"
#include "socrhythm/distance.hpp"
#include "socrhythm/oscillsim.hpp"
#include "socrhythm/rhythm.hpp"
#include "socrhythm/stats.hpp"
#include "socrhythm/structure.hpp"

using namespace socrhythm;
using acceptance::Verdict;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

std::array<double, kHoursPerWeek> random_series(Rng& rng) {
  std::array<double, kHoursPerWeek> s{};
  for (auto& v : s) v = 60 * uniform01(rng);
  return s;
}

// ---------------------------------------------------------------- 1

Verdict dft_oracle() {
  const auto t0 = Clock::now();
  Rng rng(1);
  std::set<int> kept{0};
  for (int i = 1; i <= kDayHarmonics; ++i) {
    kept.insert(7 * i);
    kept.insert(168 - 7 * i);
  }
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto x = random_series(rng);
    // direct definitions
    std::array<std::complex<long double>, kSpectrumSize> X{};
    for (int k = 0; k < kSpectrumSize; ++k) {
      for (int t = 0; t < kSpectrumSize; ++t) {
        const long double a = -two_pi * ((k * t) % kSpectrumSize) / kSpectrumSize;
        X[k] += std::complex<long double>(x[t] * std::cos(a), x[t] * std::sin(a));
      }
    }
    std::array<long double, kHoursPerDay> want{};
    for (int t = 0; t < kHoursPerDay; ++t) {
      std::complex<long double> acc = 0;
      for (int k : kept) {
        const long double a = two_pi * ((k * t) % kSpectrumSize) / kSpectrumSize;
        acc += X[k] * std::complex<long double>(std::cos(a), std::sin(a));
      }
      want[t] = acc.real() / kSpectrumSize;
    }
    const auto spec = dft168(x);
    const auto filtered = bandpass(spec);
    const auto got = reconstruct24(filtered);
    long double scale = 0, rscale = 0;
    for (const auto& c : X) scale = std::max(scale, std::abs(c));
    for (auto v : want) rscale = std::max(rscale, std::abs(v));
    for (int k = 0; k < kSpectrumSize; ++k) {
      const std::complex<long double> ref = kept.count(k) ? X[k] : std::complex<long double>(0);
      const std::complex<long double> s(spec[k].real(), spec[k].imag()), f(filtered[k].real(), filtered[k].imag());
      worst = std::max(worst, static_cast<double>(std::abs(s - X[k]) / scale));
      worst = std::max(worst, static_cast<double>(std::abs(f - ref) / scale));
    }
    for (int t = 0; t < kHoursPerDay; ++t) worst = std::max(worst, static_cast<double>(std::abs(got[t] - want[t]) / rscale));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10, "max rel err " + num(worst) + ", " + num(secs) + " s"};
}

// ---------------------------------------------------------------- 2

Verdict analytic_rhythm() {
  const auto run = [](int shift) {
    WeeklyUsageSeries s{UserId("u"), WeekIndex{0}, {}};
    for (int t = 0; t < kHoursPerWeek; ++t) s.minutes[t] = 1 + std::cos(2 * std::numbers::pi * (t - shift) / 24);
    return rhythm_of_week(s).values;
  };
  Profile24 want{};
  double norm = 0;
  for (int h = 0; h < 24; ++h) norm += std::pow(1 + std::cos(2 * std::numbers::pi * h / 24), 2);
  for (int h = 0; h < 24; ++h) want[h] = (1 + std::cos(2 * std::numbers::pi * h / 24)) / std::sqrt(norm);
  const auto r0 = run(0), r1 = run(1);
  double err = 0, perm = 0;
  for (int h = 0; h < 24; ++h) {
    err = std::max(err, std::abs(r0[h] - want[h]));
    perm = std::max(perm, std::abs(r1[h] - r0[(h + 23) % 24]));
  }
  return {err <= 1e-9 && perm <= 1e-9, "analytic err " + num(err) + ", shift err " + num(perm)};
}

// ---------------------------------------------------------------- 3

Verdict similarity_properties() {
  Rng rng(3);
  std::vector<Profile24> v(10000);
  std::vector<double> raw(24);
  for (auto& p : v) {
    for (auto& x : raw) x = 2 * uniform01(rng) - 1;
    p = normalize(raw);
  }
  double self = 0;
  bool symmetric = true, in_range = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    self = std::max(self, std::abs(similarity(v[i], v[i]) - 1));
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double a = similarity(v[i], v[j]);
      symmetric = symmetric && a == similarity(v[j], v[i]);
      in_range = in_range && a >= -1 && a <= 1;
    }
  }
  return {symmetric && in_range && self <= 1e-12,
          std::string("symmetric ") + (symmetric ? "yes" : "no") + ", range " + (in_range ? "ok" : "violated") +
              ", max |s(r,r)-1| " + num(self) + " over all 10^4 choose 2 pairs"};
}

// ---------------------------------------------------------------- 4

Verdict graph_oracles() {
  Rng rng(4);
  double sssp = 0;
  bool shorter = false;
  for (int rep = 0; rep < 200; ++rep) {
    const auto n = 2 + uniform_index(rng, 49);
    const auto g = oracle::random_graph(n, std::min(1.0, 3.0 / static_cast<double>(n)), rng);
    const auto fw = oracle::floyd_warshall_weighted(g);
    for (NodeIndex s = 0; s < g.node_count(); ++s) {
      const auto d = weighted_sssp(g, s);
      for (NodeIndex t = 0; t < g.node_count(); ++t) {
        if (std::isinf(fw[s][t]) != !d.reachable(t)) sssp = INFINITY;
        if (!std::isinf(fw[s][t])) sssp = std::max(sssp, std::abs(d.distance[t] - fw[s][t]));
      }
    }
    // drop a random third of the edges
    GraphBuilder b(WeekIndex{0});
    for (const auto& u : g.nodes()) b.add_node(u);
    for (const auto& e : g.edges()) {
      if (uniform01(rng) > 1.0 / 3) b.add_weight(g.node(e.a), g.node(e.b), e.weight);
    }
    const auto fewer = oracle::floyd_warshall_weighted(b.build());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) shorter = shorter || fewer[i][j] < fw[i][j] - 1e-15;
    }
  }
  double cg = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = oracle::random_graph(8, 0.5, rng);
    const auto w = oracle::weight_matrix(g);
    for (NodeIndex i = 0; i < 8; ++i) cg = std::max(cg, std::abs(weighted_clustering_coefficient(g, i) - oracle::clemente_grassi(w, i)));
  }
  double tri = 0;
  for (double w : {1.0, 600.0, 1e5}) {
    GraphBuilder b(WeekIndex{0});
    b.add_weight(UserId("a"), UserId("b"), w);
    b.add_weight(UserId("b"), UserId("c"), w);
    b.add_weight(UserId("a"), UserId("c"), w);
    for (double c : weighted_clustering_all(b.build())) tri = std::max(tri, std::abs(c - 1));
  }
  return {sssp <= 1e-12 && !shorter && cg <= 1e-12 && tri <= 1e-12,
          "sssp err " + num(sssp) + ", removal shortened " + (shorter ? "yes" : "no") + ", CG err " + num(cg) +
              ", triangle err " + num(tri)};
}

// ---------------------------------------------------------------- 5

Verdict welch_reference() {
  Rng rng(5);
  std::normal_distribution<double> z(0, 1);
  double dt = 0, dp = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const auto nx = 2 + uniform_index(rng, 60), ny = 2 + uniform_index(rng, 60);
    const double sx = 0.1 + 3 * uniform01(rng), sy = 0.1 + 3 * uniform01(rng), shift = uniform01(rng) - 0.5;
    std::vector<double> x(nx), y(ny);
    for (auto& v : x) v = sx * z(rng);
    for (auto& v : y) v = shift + sy * z(rng);
    const auto got = stats::welch_t(x, y);
    const auto ref = oracle::welch_wide(x, y);
    dt = std::max(dt, std::abs(got.t - ref.t));
    dp = std::max(dp, std::abs(got.p - ref.p));
  }
  return {dt <= 1e-10 && dp <= 1e-8, "max |dt| " + num(dt) + ", max |dp| " + num(dp)};
}

// ---------------------------------------------------------------- 6

Verdict lock_boundary() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (double dw : {0.5, 1.0, 2.0}) {
    const double critical = dw / 2;
    // K on a 5% grid of the critical value; the transition must sit at it
    std::optional<double> first_locked, last_drifting;
    for (int i = 10; i <= 30; ++i) {
      const double k = critical * 0.05 * i;
      const bool locked = run_two_oscillator({dw, k, 800}).locked;
      if (locked && !first_locked) first_locked = k;
      if (!locked) last_drifting = k;
    }
    const bool here = first_locked && last_drifting && *last_drifting < *first_locked &&
                      *first_locked - *last_drifting <= 0.05 * critical + 1e-12 &&
                      *last_drifting <= critical + 1e-12 && *first_locked >= critical - 0.05 * critical - 1e-12;
    ok = ok && here;
    detail += "dw=" + num(dw) + ": drift<=" + num(last_drifting.value_or(NAN)) + " lock>=" +
              num(first_locked.value_or(NAN)) + " (2K=dw at " + num(critical) + "); ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 30, detail + num(secs) + " s"};
}

// ---------------------------------------------------------------- 12

Verdict powerlaw_recovery() {
  const auto t0 = Clock::now();
  Rng rng(12);
  const oracle::PowerLawSampler sample(4.8, 2);
  std::vector<std::int64_t> degrees(100000);
  for (auto& k : degrees) k = sample(rng);
  const double alpha = powerlaw_mle(degrees, 2);
  const double secs = seconds_since(t0);
  return {std::abs(alpha - 4.8) <= 0.15 && secs < 5, "alpha " + num(alpha) + ", " + num(secs) + " s"};
}

// ---------------------------------------------------------------- 13

Verdict end_to_end_determinism() {
  const fs::path root = fs::temp_directory_path() / "socrhythm_acceptance_e2e";
  fs::remove_all(root);
  fs::create_directories(root);
  socrhythm::csv::write_file_atomic(root / "config.json",
                                    R"({"population": 400, "weeks": 4, "closed_triads": 30, "open_triads": 30, "seed": 13})");
  std::vector<fs::path> dirs{root / "run1", root / "run2"};
  for (const auto& d : dirs) {
    const auto out = d.string();
    if (cli::run({"simulate", "--config", (root / "config.json").string(), "--out", out}) != cli::kOk ||
        cli::run({"report", "--events", (d / "events.csv").string(), "--seed", "13", "--out", out}) != cli::kOk) {
      return {false, "pipeline failed in " + out};
    }
  }
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename().string();
    if (name == "manifest.json") continue;  // carries wall-clock timings
    ++compared;
    const auto other = dirs[1] / name;
    if (!fs::exists(other) || csv::read_file(entry.path()) != csv::read_file(other)) differing.push_back(name);
  }
  fs::remove_all(root);
  std::string detail = std::to_string(compared) + " files compared";
  for (const auto& f : differing) detail += ", differs: " + f;
  return {differing.empty() && compared >= 20, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  std::size_t triad_replicates = 1000;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream s(argv[++i]);
      std::string item;
      while (std::getline(s, item, ',')) only.insert(std::stoi(item));
    } else if (a == "--triad-replicates" && i + 1 < argc) {
      triad_replicates = std::stoul(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N,M,...] [--triad-replicates N]\n", argv[0]);
      return 2;
    }
  }
  const auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

  // the population run is shared by 7, 8, 10 and 11
  std::optional<acceptance::SimData> population;
  double population_secs = 0;
  const auto sim = [&]() -> const acceptance::SimData& {
    if (!population) {
      const auto t0 = Clock::now();
      population = acceptance::prepare(acceptance::default_population_config());
      population_secs = seconds_since(t0);
      std::printf("      population run: %zu events, %zu rhythm rows, %.1f s\n", population->output.events.size(),
                  population->rhythms.size(), population_secs);
      std::fflush(stdout);
    }
    return *population;
  };
  const auto timed_sim = [&](auto f) {
    return [&, f]() {
      const auto& d = sim();
      const auto t0 = Clock::now();
      auto v = f(d);
      const double total = population_secs + seconds_since(t0);
      v.pass = v.pass && total < 300;
      v.detail += "; with simulation " + num(total) + " s";
      return v;
    };
  };

  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "DFT/bandpass oracle equivalence", dft_oracle},
      {2, "analytic rhythm recovery", analytic_rhythm},
      {3, "similarity properties", similarity_properties},
      {4, "graph oracles", graph_oracles},
      {5, "Welch t-test vs extended precision", welch_reference},
      {6, "two-oscillator lock boundary", lock_boundary},
      {7, "threshold then log-linear similarity rise", timed_sim(acceptance::weight_curve_shape)},
      {8, "entrainment sign", timed_sim(acceptance::entrainment_sign)},
      {9, "triadic contagion",
       [&] { return acceptance::triadic_contagion(acceptance::default_population_config(), triad_replicates); }},
      {10, "community similarity vs clustering", timed_sim(acceptance::community_clustering)},
      {11, "similarity decay with distance", timed_sim(acceptance::distance_decay)},
      {12, "power-law exponent recovery", powerlaw_recovery},
      {13, "end-to-end determinism", end_to_end_determinism},
  };

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!wanted(c.id)) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    ++ran;
    failed += !v.pass;
    std::printf("%s %2d %s (%.1f s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, seconds_since(t0), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
