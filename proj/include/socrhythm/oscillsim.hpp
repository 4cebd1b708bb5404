#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "socrhythm/eventlog.hpp"
#include "socrhythm/random.hpp"
#include "socrhythm/socialnet.hpp"
#include "socrhythm/types.hpp"

namespace socrhythm {

/// Simulated user. Phase and drift are in hours; the daily activity bump is
/// amplitude * exp(concentration * (cos(2 pi (h - phase) / 24) - 1)).
struct Agent {
  UserId id;
  double phase = 0;          // [0, 24)
  double omega = 0;          // hours/day drift of the intrinsic rhythm
  double amplitude = 1;
  double concentration = 2;  // > 0
  double sociability = 1;    // >= 0, scales visit and encounter rates
};

double wrap_hours(double h);
/// Signed circular difference b - a in (-12, 12].
double phase_gap(double a, double b);

double activity(const Agent& agent, double hour_of_day);
/// Activity at hour-bin centers 0.5, 1.5, ..., 23.5.
std::array<double, kHoursPerDay> activity_profile(const Agent& agent);

/// K(w) = kappa * max(0, log10 w - theta), in rad/day. Zero for w <= 0.
double coupling_strength(double w, double kappa, double theta);

struct Coupling {
  std::uint32_t other = 0;
  double k = 0;  // rad/day
};
using CouplingTable = std::vector<std::vector<Coupling>>;

/// One explicit-Euler step of length dt days:
///   phi_i += dt*omega_i + dt*sum_j k_ij (24/2pi) sin(2pi (phi_j - phi_i)/24) + noise*sqrt(dt)*N(0,1)
/// All agents read the pre-step phases. No random draws when noise == 0.
void step_phases(std::vector<Agent>& agents, const CouplingTable& coupling, double dt, double noise, Rng& rng);

/// Same step with couplings taken from a weighted graph through K(w). Graph
/// nodes are matched to agents by id; agents outside the graph are uncoupled.
void step_phases(std::vector<Agent>& agents, const WeightedGraph& g, double dt, double kappa, double theta,
                 double noise, std::uint64_t seed);

/// True iff psi' = delta_omega - 2K sin(psi) has a fixed point (|dw| <= 2K).
bool lock_condition_two(double delta_omega, double k);

/// Log-normal dwell with median 600 s and sigma_log 1.0, rounded to whole
/// seconds (>= 1).
struct DwellModel {
  double median_s = 600;
  double sigma_log = 1.0;
  std::int64_t draw(Rng& rng) const;
  double mean() const;
};

struct EmitOptions {
  WeekClock clock{};
  DwellModel dwell{};
  /// Probability that an online common friend joins a visit.
  double join_probability = 0;
};

/// Expected visits/day on a tie of base rate `strength`:
///   strength * sqrt(s_i s_j) * amp_i * amp_j * overlap(profile_i, profile_j)
/// with overlap the cosine of the two 24-hour profiles.
double expected_daily_visits(const Agent& a, const Agent& b, double strength);

/// Visits of one simulated day. Each edge of `ties` (weight = base visit
/// rate per day, see expected_daily_visits) yields a Poisson number of
/// visits whose hours follow the product of the endpoints' profiles.
/// Day 0 starts at clock.effective_origin().
std::vector<VisitEvent> emit_events(const std::vector<Agent>& agents, const WeightedGraph& ties, std::int64_t day,
                                    const EmitOptions& options, std::uint64_t seed);

struct ScheduledEdge {
  UserId a;
  UserId b;
  std::int64_t week = 0;
  double strength = 1;
};

struct SimConfig {
  std::size_t population = 2000;
  std::int64_t weeks = 10;
  /// Simulated days run before recording starts.
  std::int64_t warmup_days = 14;

  double kappa = 0.05;  // rad/day per log10 second above theta
  double theta = kStrongLog10Threshold;
  double phase_noise = 0.3;  // hours per sqrt(day)
  double omega_sd = 0.2;     // hours/day, per agent
  double circle_omega_sd = 0.15;  // hours/day, shared by a circle

  double concentration_min = 2;
  double concentration_max = 5;
  double sociability_median = 1.0;
  double sociability_sigma_log = 0.8;

  std::size_t circle_size_min = 10;
  std::size_t circle_size_max = 30;
  double circle_density_min = 0.15;
  double circle_density_max = 0.9;
  double circle_phase_mean = 21;  // hours
  double circle_phase_sd = 6;
  double member_phase_sd = 1.5;
  double bridge_ties_per_agent = 1.0;

  double tie_strength_min = 0.3;  // visits/day at unit sociability
  double tie_strength_max = 3.0;
  double encounter_rate = 0.5;  // encounters/day at unit sociability
  double homophily = 3.0;
  double bond_probability = 0.05;
  double join_probability = 0.15;

  std::size_t closed_triads = 150;
  std::size_t open_triads = 150;
  std::vector<ScheduledEdge> schedule;

  WeekClock clock{};
  DwellModel dwell{};
  std::uint64_t seed = 1;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;
};

/// Persistent ties of the simulated population plus their rolling weekly
/// dwell totals.
class NetworkState {
 public:
  struct Tie {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double strength = 0;
    std::array<double, 7> daily{};  // dwell seconds, ring buffer by day
    double weekly() const;
  };

  explicit NetworkState(std::size_t agents = 0);

  std::size_t agent_count() const noexcept { return adjacency_.size(); }
  const std::vector<Tie>& ties() const noexcept { return ties_; }
  std::optional<std::size_t> find(std::uint32_t a, std::uint32_t b) const;
  bool connected(std::uint32_t a, std::uint32_t b) const { return find(a, b).has_value(); }
  /// Adds the tie, or raises the strength of an existing one to `strength`.
  std::size_t add_tie(std::uint32_t a, std::uint32_t b, double strength);
  /// Sorted neighbor indices of agent `a`.
  const std::vector<std::uint32_t>& friends(std::uint32_t a) const { return neighbors_.at(a); }
  /// Starts a new ring-buffer day: clears slot `day mod 7`.
  void begin_day(std::int64_t day);
  void record_dwell(std::uint32_t a, std::uint32_t b, std::int64_t day, double seconds);
  CouplingTable coupling(double kappa, double theta) const;
  /// Ties as a graph; weight per tie from `weight_of`.
  template <typename F>
  WeightedGraph graph(const std::vector<Agent>& agents, WeekIndex week, F weight_of) const;

 private:
  std::vector<Tie> ties_;
  std::vector<std::map<std::uint32_t, std::size_t>> adjacency_;
  std::vector<std::vector<std::uint32_t>> neighbors_;
};

struct Encounter {
  std::uint32_t visitor = 0;
  std::uint32_t owner = 0;
  int hour = 0;
  bool bonded = false;
};

/// One day of network evolution: applies scheduled edges starting on `day`
/// (recorded-time day; week w starts on day 7w), then draws homophilous
/// random encounters. Partners are proposed in proportion to their activity
/// at the encounter hour times sociability and accepted with probability
/// exp(homophily * (cos(2pi dphi/24) - 1)). An encounter between non-friends
/// bonds into a tie with probability bond_probability.
std::vector<Encounter> evolve_network(NetworkState& state, const std::vector<Agent>& agents, std::int64_t day,
                                      const SimConfig& config, Rng& rng);

struct PhaseRecord {
  std::int64_t week = 0;
  UserId user;
  double phase_hours = 0;  // circular mean over the week's hourly phases
};

struct SimulationOutput {
  std::vector<VisitEvent> events;  // sorted by (start, visitor, owner, dwell)
  std::vector<PhaseRecord> phases;
  std::vector<WeightedGraph> truth;  // one tie graph per week
  std::vector<Agent> agents;         // final state
  std::vector<ScheduledEdge> schedule;  // every scheduled tie the run applied
};

/// Initial population: agents plus ties and the schedule used by the run.
struct Population {
  std::vector<Agent> agents;
  NetworkState network;
  std::vector<ScheduledEdge> schedule;
};

/// Circles of varying density with phase-clustered members, homophilous
/// bridge ties, and planted triad closures.
Population build_population(const SimConfig& config);

/// Runs the day loop on a prepared population.
SimulationOutput simulate(Population population, const SimConfig& config);

/// build_population + simulate. Deterministic given config.seed.
SimulationOutput run_simulation(const SimConfig& config);

struct TwoOscillatorScenario {
  double delta_omega = 1;  // rad/day
  double k = 0.5;          // rad/day
  double days = 400;
};

struct TwoOscillatorResult {
  bool locked = false;
  double final_gap = 0;     // rad, unwrapped psi at the end
  double late_drift = 0;    // |psi(end) - psi(mid)|, rad
};

enum class TriadTopology { ClosedTriangle, OpenPath };

struct TriadScenario {
  TriadTopology topology = TriadTopology::ClosedTriangle;
  /// Tie strengths (visits/day) for A-B (formed in week 1), A-C and B-C.
  double ab = 3;
  double ac = 3;
  double bc = 3;
  std::array<double, 3> phases{19, 17, 23};  // A, B, C
  /// Size of each member's own circle of background friends, centered on the
  /// member's phase. Zero leaves the three agents alone.
  std::size_t circle = 8;
  SimConfig base{};
};

using ScenarioSpec = std::variant<TwoOscillatorScenario, TriadScenario, SimConfig>;

TwoOscillatorResult run_two_oscillator(const TwoOscillatorScenario& scenario);
SimulationOutput run_triad(const TriadScenario& scenario);

void write_phases(std::ostream& out, const std::vector<PhaseRecord>& phases);
void write_truth_graphs(std::ostream& out, const std::vector<WeightedGraph>& graphs);
/// `week,user_a,user_b,strength`.
void write_schedule(std::ostream& out, const std::vector<ScheduledEdge>& schedule);

template <typename F>
WeightedGraph NetworkState::graph(const std::vector<Agent>& agents, WeekIndex week, F weight_of) const {
  GraphBuilder builder(week);
  for (const auto& t : ties_) {
    const double w = weight_of(t);
    if (w > 0) builder.add_weight(agents[t.a].id, agents[t.b].id, w);
  }
  return builder.build();
}

}  // namespace socrhythm
