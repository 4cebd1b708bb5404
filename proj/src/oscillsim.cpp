#include "socrhythm/oscillsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <tuple>

#include "socrhythm/csv.hpp"

namespace socrhythm {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kRadPerHour = kTwoPi / kHoursPerDay;
constexpr std::int64_t kSecondsPerDay = 24 * kSecondsPerHour;

double log_uniform(Rng& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::exp(std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo)));
}

double normal(Rng& rng, double mean, double sd) {
  if (sd == 0) return mean;
  return std::normal_distribution<double>(mean, sd)(rng);
}

std::int64_t poisson(Rng& rng, double mean) {
  if (mean <= 0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

// Index drawn in proportion to the non-negative weights whose running sum is
// `cumulative`.
std::size_t sample_cumulative(const std::vector<double>& cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

using Profile = std::array<double, kHoursPerDay>;

double profile_overlap(const Profile& a, const Profile& b) {
  double ab = 0, aa = 0, bb = 0;
  for (int h = 0; h < kHoursPerDay; ++h) {
    ab += a[h] * b[h];
    aa += a[h] * a[h];
    bb += b[h] * b[h];
  }
  return (aa == 0 || bb == 0) ? 0 : ab / std::sqrt(aa * bb);
}

std::vector<Profile> profiles_of(const std::vector<Agent>& agents) {
  std::vector<Profile> out(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) out[i] = activity_profile(agents[i]);
  return out;
}

double daily_rate(const Agent& a, const Agent& b, const Profile& pa, const Profile& pb, double strength) {
  if (strength <= 0) return 0;
  // profile peaks are the amplitudes; overlap is scale free
  return strength * std::sqrt(a.sociability * b.sociability) * a.amplitude * b.amplitude * profile_overlap(pa, pb);
}

std::optional<std::uint32_t> agent_index(const std::vector<Agent>& agents, const UserId& id) {
  const auto it = std::lower_bound(agents.begin(), agents.end(), id,
                                   [](const Agent& a, const UserId& u) { return a.id < u; });
  if (it != agents.end() && it->id == id) return static_cast<std::uint32_t>(it - agents.begin());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].id == id) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

std::vector<std::uint32_t> common_friends(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
  std::vector<std::uint32_t> out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

struct TieVisitSource {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double strength = 0;
};

// Emits one day of tie visits plus joins. `record` receives every event.
template <typename FriendsOf, typename Record>
void emit_day(const std::vector<Agent>& agents, const std::vector<Profile>& profiles,
              const std::vector<TieVisitSource>& ties, FriendsOf friends_of, std::int64_t day,
              const EmitOptions& options, Rng& rng, Record record) {
  const EpochSeconds day_start = options.clock.effective_origin() + day * kSecondsPerDay;
  std::vector<double> cumulative(kHoursPerDay);
  for (const auto& t : ties) {
    const auto& pa = profiles[t.a];
    const auto& pb = profiles[t.b];
    const auto count = poisson(rng, daily_rate(agents[t.a], agents[t.b], pa, pb, t.strength));
    if (count == 0) continue;
    double acc = 0;
    for (int h = 0; h < kHoursPerDay; ++h) cumulative[h] = acc += pa[h] * pb[h];
    for (std::int64_t v = 0; v < count; ++v) {
      const int hour = static_cast<int>(sample_cumulative(cumulative, rng));
      const bool forward = uniform01(rng) < 0.5;
      const auto visitor = forward ? t.a : t.b;
      const auto owner = forward ? t.b : t.a;
      const EpochSeconds start =
          day_start + hour * kSecondsPerHour + static_cast<EpochSeconds>(uniform01(rng) * kSecondsPerHour);
      const auto dwell = options.dwell.draw(rng);
      record(VisitEvent{agents[visitor].id, agents[owner].id, start, dwell}, visitor, owner);
      if (options.join_probability <= 0) continue;
      for (const auto k : common_friends(friends_of(visitor), friends_of(owner))) {
        const double online = agents[k].amplitude > 0 ? profiles[k][hour] / agents[k].amplitude : 0;
        if (uniform01(rng) >= options.join_probability * online) continue;
        // joins arrive while the host visit runs, within the same hour
        const EpochSeconds hour_end = day_start + (hour + 1) * kSecondsPerHour;
        const double window = static_cast<double>(std::min<EpochSeconds>(dwell, hour_end - start));
        const EpochSeconds join = start + static_cast<EpochSeconds>(uniform01(rng) * window);
        record(VisitEvent{agents[k].id, agents[owner].id, join, options.dwell.draw(rng)}, k, owner);
      }
    }
  }
}

void sort_events(std::vector<VisitEvent>& events) {
  std::sort(events.begin(), events.end(), [](const VisitEvent& x, const VisitEvent& y) {
    return std::tie(x.start, x.visitor, x.owner, x.dwell) < std::tie(y.start, y.visitor, y.owner, y.dwell);
  });
}

std::string agent_name(std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::max<std::size_t>(4, std::to_string(n > 0 ? n - 1 : 0).size());
  return "u" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

void require(bool ok, const char* field, const std::string& why) {
  if (!ok) throw Error(Errc::InvalidConfig, std::string(field) + ": " + why);
}

}  // namespace

double wrap_hours(double h) {
  double r = std::fmod(h, 24.0);
  if (r < 0) r += 24.0;
  return r >= 24.0 ? 0.0 : r;
}

double phase_gap(double a, double b) {
  double d = std::fmod(b - a, 24.0);
  if (d <= -12) d += 24;
  if (d > 12) d -= 24;
  return d;
}

double activity(const Agent& agent, double hour_of_day) {
  return agent.amplitude * std::exp(agent.concentration * (std::cos(kRadPerHour * (hour_of_day - agent.phase)) - 1));
}

std::array<double, kHoursPerDay> activity_profile(const Agent& agent) {
  std::array<double, kHoursPerDay> p{};
  for (int h = 0; h < kHoursPerDay; ++h) p[h] = activity(agent, h + 0.5);
  return p;
}

double coupling_strength(double w, double kappa, double theta) {
  if (!(w > 0)) return 0;
  return kappa * std::max(0.0, std::log10(w) - theta);
}

void step_phases(std::vector<Agent>& agents, const CouplingTable& coupling, double dt, double noise, Rng& rng) {
  const std::size_t n = agents.size();
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pull = 0;
    if (i < coupling.size()) {
      for (const auto& c : coupling[i]) pull += c.k * std::sin(kRadPerHour * (agents[c.other].phase - agents[i].phase));
    }
    next[i] = agents[i].phase + dt * agents[i].omega + dt * pull / kRadPerHour;
  }
  if (noise > 0) {
    std::normal_distribution<double> gauss(0.0, noise * std::sqrt(dt));
    for (auto& p : next) p += gauss(rng);
  }
  for (std::size_t i = 0; i < n; ++i) agents[i].phase = wrap_hours(next[i]);
}

void step_phases(std::vector<Agent>& agents, const WeightedGraph& g, double dt, double kappa, double theta,
                 double noise, std::uint64_t seed) {
  CouplingTable table(agents.size());
  std::vector<std::optional<std::uint32_t>> of_node(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) of_node[v] = agent_index(agents, g.node(v));
  for (const auto& e : g.edges()) {
    const auto a = of_node[e.a];
    const auto b = of_node[e.b];
    if (!a || !b) continue;
    const double k = coupling_strength(e.weight, kappa, theta);
    if (k == 0) continue;
    table[*a].push_back({*b, k});
    table[*b].push_back({*a, k});
  }
  Rng rng(seed);
  step_phases(agents, table, dt, noise, rng);
}

bool lock_condition_two(double delta_omega, double k) { return std::abs(delta_omega) <= 2 * k; }

std::int64_t DwellModel::draw(Rng& rng) const {
  const double x = std::lognormal_distribution<double>(std::log(median_s), sigma_log)(rng);
  return std::max<std::int64_t>(1, std::llround(x));
}

double DwellModel::mean() const { return median_s * std::exp(0.5 * sigma_log * sigma_log); }

double expected_daily_visits(const Agent& a, const Agent& b, double strength) {
  return daily_rate(a, b, activity_profile(a), activity_profile(b), strength);
}

std::vector<VisitEvent> emit_events(const std::vector<Agent>& agents, const WeightedGraph& ties, std::int64_t day,
                                    const EmitOptions& options, std::uint64_t seed) {
  std::vector<TieVisitSource> sources;
  std::vector<std::vector<std::uint32_t>> friends(agents.size());
  std::vector<std::optional<std::uint32_t>> of_node(ties.node_count());
  for (NodeIndex v = 0; v < ties.node_count(); ++v) of_node[v] = agent_index(agents, ties.node(v));
  for (const auto& e : ties.edges()) {
    const auto a = of_node[e.a];
    const auto b = of_node[e.b];
    if (!a || !b) continue;
    sources.push_back({*a, *b, e.weight});
    friends[*a].push_back(*b);
    friends[*b].push_back(*a);
  }
  for (auto& f : friends) std::sort(f.begin(), f.end());
  Rng rng(seed);
  std::vector<VisitEvent> out;
  emit_day(agents, profiles_of(agents), sources, [&](std::uint32_t i) -> const auto& { return friends[i]; }, day,
           options, rng, [&](VisitEvent ev, std::uint32_t, std::uint32_t) { out.push_back(std::move(ev)); });
  sort_events(out);
  return out;
}

void SimConfig::validate() const {
  require(population >= 2, "population", "must be >= 2");
  require(weeks >= 2, "weeks", "must be >= 2");
  require(warmup_days >= 0, "warmup_days", "must be >= 0");
  require(kappa >= 0, "kappa", "must be >= 0");
  require(std::isfinite(theta), "theta", "must be finite");
  require(phase_noise >= 0, "phase_noise", "must be >= 0");
  require(omega_sd >= 0, "omega_sd", "must be >= 0");
  require(circle_omega_sd >= 0, "circle_omega_sd", "must be >= 0");
  require(concentration_min > 0 && concentration_max >= concentration_min, "concentration_min",
          "need 0 < concentration_min <= concentration_max");
  require(sociability_median >= 0, "sociability_median", "must be >= 0");
  require(sociability_sigma_log >= 0, "sociability_sigma_log", "must be >= 0");
  require(circle_size_min >= 2 && circle_size_max >= circle_size_min, "circle_size_min",
          "need 2 <= circle_size_min <= circle_size_max");
  require(circle_density_min >= 0 && circle_density_max <= 1 && circle_density_min <= circle_density_max,
          "circle_density_min", "need 0 <= circle_density_min <= circle_density_max <= 1");
  require(circle_phase_sd >= 0, "circle_phase_sd", "must be >= 0");
  require(member_phase_sd >= 0, "member_phase_sd", "must be >= 0");
  require(bridge_ties_per_agent >= 0, "bridge_ties_per_agent", "must be >= 0");
  require(tie_strength_min > 0 && tie_strength_max >= tie_strength_min, "tie_strength_min",
          "need 0 < tie_strength_min <= tie_strength_max");
  require(encounter_rate >= 0, "encounter_rate", "must be >= 0");
  require(homophily >= 0, "homophily", "must be >= 0");
  require(bond_probability >= 0 && bond_probability <= 1, "bond_probability", "must be in [0, 1]");
  require(join_probability >= 0 && join_probability <= 1, "join_probability", "must be in [0, 1]");
  require(dwell.median_s > 0, "dwell.median_s", "must be > 0");
  require(dwell.sigma_log >= 0, "dwell.sigma_log", "must be >= 0");
  for (const auto& s : schedule) {
    require(s.a != s.b, "schedule", "self edge " + s.a.str());
    require(s.week >= 0 && s.week < weeks, "schedule", "week out of range for " + s.a.str() + "-" + s.b.str());
    require(s.strength >= 0, "schedule", "strength must be >= 0");
  }
}

double NetworkState::Tie::weekly() const {
  double s = 0;
  for (double d : daily) s += d;
  return s;
}

NetworkState::NetworkState(std::size_t agents) : adjacency_(agents), neighbors_(agents) {}

std::optional<std::size_t> NetworkState::find(std::uint32_t a, std::uint32_t b) const {
  if (a >= adjacency_.size()) return std::nullopt;
  const auto it = adjacency_[a].find(b);
  if (it == adjacency_[a].end()) return std::nullopt;
  return it->second;
}

std::size_t NetworkState::add_tie(std::uint32_t a, std::uint32_t b, double strength) {
  if (a == b) throw Error(Errc::Infeasible, "self tie");
  if (const auto existing = find(a, b)) {
    ties_[*existing].strength = std::max(ties_[*existing].strength, strength);
    return *existing;
  }
  const std::size_t idx = ties_.size();
  ties_.push_back({std::min(a, b), std::max(a, b), strength, {}});
  adjacency_.at(a).emplace(b, idx);
  adjacency_.at(b).emplace(a, idx);
  auto insert_sorted = [](std::vector<std::uint32_t>& v, std::uint32_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  };
  insert_sorted(neighbors_[a], b);
  insert_sorted(neighbors_[b], a);
  return idx;
}

void NetworkState::begin_day(std::int64_t day) {
  const auto slot = static_cast<std::size_t>(((day % 7) + 7) % 7);
  for (auto& t : ties_) t.daily[slot] = 0;
}

void NetworkState::record_dwell(std::uint32_t a, std::uint32_t b, std::int64_t day, double seconds) {
  const auto idx = find(a, b);
  if (!idx) return;
  ties_[*idx].daily[static_cast<std::size_t>(((day % 7) + 7) % 7)] += seconds;
}

CouplingTable NetworkState::coupling(double kappa, double theta) const {
  CouplingTable table(adjacency_.size());
  for (const auto& t : ties_) {
    const double k = coupling_strength(t.weekly(), kappa, theta);
    if (k == 0) continue;
    table[t.a].push_back({t.b, k});
    table[t.b].push_back({t.a, k});
  }
  return table;
}

std::vector<Encounter> evolve_network(NetworkState& state, const std::vector<Agent>& agents, std::int64_t day,
                                      const SimConfig& config, Rng& rng) {
  if (day >= 0 && day % 7 == 0) {
    for (const auto& s : config.schedule) {
      if (s.week * 7 != day) continue;
      const auto a = agent_index(agents, s.a);
      const auto b = agent_index(agents, s.b);
      if (!a || !b) throw Error(Errc::InvalidConfig, "schedule: unknown user in " + s.a.str() + "-" + s.b.str());
      state.add_tie(*a, *b, s.strength);
    }
  }

  std::vector<Encounter> out;
  const std::size_t n = agents.size();
  if (config.encounter_rate <= 0 || n < 2) return out;
  const auto profiles = profiles_of(agents);
  // proposal weight of j at hour h: activity times sociability
  std::vector<std::vector<double>> cumulative(kHoursPerDay, std::vector<double>(n));
  for (int h = 0; h < kHoursPerDay; ++h) {
    double acc = 0;
    for (std::size_t j = 0; j < n; ++j) cumulative[h][j] = acc += profiles[j][h] * agents[j].sociability;
  }
  std::vector<double> own(kHoursPerDay);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto count = poisson(rng, config.encounter_rate * agents[i].sociability);
    if (count == 0) continue;
    double acc = 0;
    for (int h = 0; h < kHoursPerDay; ++h) own[h] = acc += profiles[i][h];
    for (std::int64_t e = 0; e < count; ++e) {
      const int hour = static_cast<int>(sample_cumulative(own, rng));
      if (cumulative[hour].back() <= 0) continue;
      std::optional<std::uint32_t> partner;
      for (int attempt = 0; attempt < 200 && !partner; ++attempt) {
        const auto j = static_cast<std::uint32_t>(sample_cumulative(cumulative[hour], rng));
        if (j == i) continue;
        const double c = std::cos(kRadPerHour * phase_gap(agents[i].phase, agents[j].phase));
        if (uniform01(rng) < std::exp(config.homophily * (c - 1))) partner = j;
      }
      if (!partner) continue;
      Encounter enc{i, *partner, hour, false};
      if (!state.connected(i, *partner) && uniform01(rng) < config.bond_probability) {
        state.add_tie(i, *partner, log_uniform(rng, config.tie_strength_min, config.tie_strength_max));
        enc.bonded = true;
      }
      out.push_back(enc);
    }
  }
  return out;
}

Population build_population(const SimConfig& config) {
  config.validate();
  Rng rng(derive_seed(config.seed, "population"));
  const std::size_t n = config.population;
  Population pop;
  pop.agents.resize(n);
  pop.network = NetworkState(n);

  // circles of consecutive agents
  std::vector<std::pair<std::size_t, std::size_t>> circles;  // [begin, end)
  for (std::size_t begin = 0; begin < n;) {
    const std::size_t span = config.circle_size_max - config.circle_size_min + 1;
    std::size_t size = config.circle_size_min + uniform_index(rng, span);
    if (n - begin < size + config.circle_size_min) size = n - begin;
    circles.emplace_back(begin, begin + size);
    begin += size;
  }
  std::vector<std::size_t> circle_of(n);
  for (std::size_t c = 0; c < circles.size(); ++c) {
    const auto [begin, end] = circles[c];
    const double center = wrap_hours(normal(rng, config.circle_phase_mean, config.circle_phase_sd));
    const double circle_omega = normal(rng, 0, config.circle_omega_sd);
    const double density =
        config.circle_density_min + uniform01(rng) * (config.circle_density_max - config.circle_density_min);
    for (std::size_t i = begin; i < end; ++i) {
      circle_of[i] = c;
      auto& a = pop.agents[i];
      a.id = UserId(agent_name(i, n));
      a.phase = wrap_hours(normal(rng, center, config.member_phase_sd));
      a.omega = normal(rng, circle_omega, config.omega_sd);
      a.concentration =
          config.concentration_min + uniform01(rng) * (config.concentration_max - config.concentration_min);
      a.sociability = config.sociability_median * std::exp(normal(rng, 0, config.sociability_sigma_log));
    }
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < end; ++j) {
        const bool ring = j == i + 1 || (i == begin && j == end - 1 && end - begin > 2);
        if (ring || uniform01(rng) < density) {
          pop.network.add_tie(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                              log_uniform(rng, config.tie_strength_min, config.tie_strength_max));
        }
      }
    }
  }

  const auto homophilous_partner = [&](std::uint32_t i, auto&& eligible) -> std::optional<std::uint32_t> {
    for (int attempt = 0; attempt < 500; ++attempt) {
      const auto j = static_cast<std::uint32_t>(uniform_index(rng, n));
      if (!eligible(j)) continue;
      const double c = std::cos(kRadPerHour * phase_gap(pop.agents[i].phase, pop.agents[j].phase));
      if (uniform01(rng) < std::exp(config.homophily * (c - 1))) return j;
    }
    return std::nullopt;
  };

  if (circles.size() > 1) {
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto count = poisson(rng, config.bridge_ties_per_agent / 2);
      for (std::int64_t b = 0; b < count; ++b) {
        const auto j = homophilous_partner(i, [&](std::uint32_t j) { return circle_of[j] != circle_of[i]; });
        if (j) pop.network.add_tie(i, *j, log_uniform(rng, config.tie_strength_min, config.tie_strength_max));
      }
    }
  }

  std::set<std::pair<std::uint32_t, std::uint32_t>> planned;
  // A and C share a circle; B is a random agent from another circle tied to
  // neither. A closed triad is an introduction: C meets B in week w - 1 and
  // B meets A in week w. An open triad only has the A-B tie in week w.
  const auto plan = [&](bool closed) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const auto a = static_cast<std::uint32_t>(uniform_index(rng, n));
      std::vector<std::uint32_t> mates;
      for (const auto f : pop.network.friends(a)) {
        if (circle_of[f] == circle_of[a]) mates.push_back(f);
      }
      if (mates.empty()) continue;
      const auto c = mates[uniform_index(rng, mates.size())];
      const auto b = static_cast<std::uint32_t>(uniform_index(rng, n));
      if (circle_of[b] == circle_of[a] || pop.network.connected(a, b) || pop.network.connected(c, b)) continue;
      const auto ab = std::minmax(a, b);
      const auto cb = std::minmax(c, b);
      if (planned.count({ab.first, ab.second}) || (closed && planned.count({cb.first, cb.second}))) continue;
      const auto week = 1 + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(config.weeks - 1)));
      planned.insert({ab.first, ab.second});
      if (closed) {
        planned.insert({cb.first, cb.second});
        pop.schedule.push_back({pop.agents[c].id, pop.agents[b].id, week - 1, config.tie_strength_max});
      }
      pop.schedule.push_back({pop.agents[a].id, pop.agents[b].id, week, config.tie_strength_max});
      return;
    }
  };
  for (std::size_t t = 0; t < config.closed_triads; ++t) plan(true);
  for (std::size_t t = 0; t < config.open_triads; ++t) plan(false);
  return pop;
}

SimulationOutput simulate(Population population, const SimConfig& base_config) {
  SimConfig config = base_config;
  config.schedule.insert(config.schedule.end(), population.schedule.begin(), population.schedule.end());
  config.validate();

  auto& agents = population.agents;
  auto& net = population.network;
  const std::size_t n = agents.size();
  Rng network_rng(derive_seed(config.seed, "network"));
  Rng event_rng(derive_seed(config.seed, "events"));
  Rng phase_rng(derive_seed(config.seed, "phases"));
  const EmitOptions options{config.clock, config.dwell, config.join_probability};

  SimulationOutput out;
  std::vector<double> sin_acc(n), cos_acc(n);
  const std::int64_t total_days = config.warmup_days + 7 * config.weeks;
  for (std::int64_t d = 0; d < total_days; ++d) {
    const std::int64_t day = d - config.warmup_days;
    const bool recording = day >= 0;
    net.begin_day(day);
    const auto encounters = evolve_network(net, agents, day, config, network_rng);
    const auto profiles = profiles_of(agents);

    const auto record = [&](VisitEvent ev, std::uint32_t visitor, std::uint32_t owner) {
      net.record_dwell(visitor, owner, day, static_cast<double>(ev.dwell));
      if (recording) out.events.push_back(std::move(ev));
    };

    std::vector<TieVisitSource> sources;
    sources.reserve(net.ties().size());
    for (const auto& t : net.ties()) sources.push_back({t.a, t.b, t.strength});
    emit_day(agents, profiles, sources, [&](std::uint32_t i) -> const auto& { return net.friends(i); }, day,
             options, event_rng, record);

    const EpochSeconds day_start = config.clock.effective_origin() + day * kSecondsPerDay;
    for (const auto& e : encounters) {
      const EpochSeconds start =
          day_start + e.hour * kSecondsPerHour + static_cast<EpochSeconds>(uniform01(event_rng) * kSecondsPerHour);
      record(VisitEvent{agents[e.visitor].id, agents[e.owner].id, start, config.dwell.draw(event_rng)}, e.visitor,
             e.owner);
    }

    const auto coupling = net.coupling(config.kappa, config.theta);
    for (int h = 0; h < kHoursPerDay; ++h) {
      step_phases(agents, coupling, 1.0 / kHoursPerDay, config.phase_noise, phase_rng);
      if (!recording) continue;
      for (std::size_t i = 0; i < n; ++i) {
        sin_acc[i] += std::sin(kRadPerHour * agents[i].phase);
        cos_acc[i] += std::cos(kRadPerHour * agents[i].phase);
      }
    }

    if (recording && day % 7 == 6) {
      const std::int64_t week = day / 7;
      for (std::size_t i = 0; i < n; ++i) {
        out.phases.push_back({week, agents[i].id, wrap_hours(std::atan2(sin_acc[i], cos_acc[i]) / kRadPerHour)});
        sin_acc[i] = cos_acc[i] = 0;
      }
      const double dwell_mean = config.dwell.mean();
      const auto end_profiles = profiles_of(agents);
      out.truth.push_back(net.graph(agents, WeekIndex{week}, [&](const NetworkState::Tie& t) {
        return 7 * dwell_mean * daily_rate(agents[t.a], agents[t.b], end_profiles[t.a], end_profiles[t.b], t.strength);
      }));
    }
  }
  sort_events(out.events);
  out.agents = std::move(agents);
  out.schedule = config.schedule;
  return out;
}

SimulationOutput run_simulation(const SimConfig& config) { return simulate(build_population(config), config); }

TwoOscillatorResult run_two_oscillator(const TwoOscillatorScenario& scenario) {
  std::vector<Agent> agents(2);
  agents[0].id = UserId("a");
  agents[1].id = UserId("b");
  agents[0].omega = scenario.delta_omega / kRadPerHour;
  const CouplingTable coupling{{{1, scenario.k}}, {{0, scenario.k}}};
  Rng rng(0);
  const auto steps = static_cast<std::int64_t>(std::llround(scenario.days * kHoursPerDay));
  double unwrapped = 0;
  double mid = 0;
  double previous = phase_gap(agents[1].phase, agents[0].phase);
  for (std::int64_t s = 0; s < steps; ++s) {
    step_phases(agents, coupling, 1.0 / kHoursPerDay, 0.0, rng);
    const double gap = phase_gap(agents[1].phase, agents[0].phase);
    unwrapped += phase_gap(previous, gap);
    previous = gap;
    if (s == steps / 2) mid = unwrapped;
  }
  TwoOscillatorResult r;
  r.final_gap = unwrapped * kRadPerHour;
  r.late_drift = std::abs(unwrapped - mid) * kRadPerHour;
  r.locked = r.late_drift < std::numbers::pi;
  return r;
}

SimulationOutput run_triad(const TriadScenario& scenario) {
  SimConfig config = scenario.base;
  config.population = 3 + 3 * scenario.circle;
  config.closed_triads = 0;
  config.open_triads = 0;
  config.encounter_rate = 0;
  config.validate();
  Rng rng(derive_seed(config.seed, "triad"));
  Population pop;
  const std::size_t n = config.population;
  pop.agents.resize(n);
  pop.network = NetworkState(n);
  const char* names[] = {"A", "B", "C"};
  for (std::size_t i = 0; i < n; ++i) {
    auto& a = pop.agents[i];
    if (i < 3) {
      a.id = UserId(names[i]);
      a.phase = wrap_hours(scenario.phases[i]);
      a.concentration = config.concentration_min;
      a.sociability = config.sociability_median;
      continue;
    }
    const std::size_t owner = (i - 3) / scenario.circle;
    a.id = UserId(agent_name(i - 3, n));
    a.phase = wrap_hours(normal(rng, scenario.phases[owner], config.member_phase_sd));
    a.omega = normal(rng, 0, config.omega_sd);
    a.concentration =
        config.concentration_min + uniform01(rng) * (config.concentration_max - config.concentration_min);
    a.sociability = config.sociability_median * std::exp(normal(rng, 0, config.sociability_sigma_log));
  }
  const auto strength = [&] { return log_uniform(rng, config.tie_strength_min, config.tie_strength_max); };
  const double density = (config.circle_density_min + config.circle_density_max) / 2;
  for (std::uint32_t owner = 0; owner < 3; ++owner) {
    const auto begin = static_cast<std::uint32_t>(3 + owner * scenario.circle);
    const auto end = static_cast<std::uint32_t>(begin + scenario.circle);
    for (auto i = begin; i < end; ++i) {
      pop.network.add_tie(owner, i, strength());
      for (auto j = i + 1; j < end; ++j) {
        if (uniform01(rng) < density) pop.network.add_tie(i, j, strength());
      }
    }
  }
  pop.network.add_tie(0, 2, scenario.ac);
  if (scenario.topology == TriadTopology::ClosedTriangle) pop.network.add_tie(1, 2, scenario.bc);
  pop.schedule.push_back({UserId("A"), UserId("B"), 1, scenario.ab});
  return simulate(std::move(pop), config);
}

void write_phases(std::ostream& out, const std::vector<PhaseRecord>& phases) {
  out << "week,user,phase_hours\n";
  for (const auto& p : phases) out << p.week << ',' << p.user.str() << ',' << csv::format_double17(p.phase_hours) << '\n';
}

void write_truth_graphs(std::ostream& out, const std::vector<WeightedGraph>& graphs) {
  bool header = true;
  for (const auto& g : graphs) {
    write_graph(out, g, header);
    header = false;
  }
}

void write_schedule(std::ostream& out, const std::vector<ScheduledEdge>& schedule) {
  out << "week,user_a,user_b,strength\n";
  for (const auto& s : schedule) {
    out << s.week << ',' << s.a.str() << ',' << s.b.str() << ',' << csv::format_double(s.strength) << '\n';
  }
}

}  // namespace socrhythm
