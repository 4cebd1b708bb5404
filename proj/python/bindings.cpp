#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "socrhythm/distance.hpp"
#include "socrhythm/entrainment.hpp"
#include "socrhythm/eventlog.hpp"
#include "socrhythm/oscillsim.hpp"
#include "socrhythm/rhythm.hpp"
#include "socrhythm/socialnet.hpp"
#include "socrhythm/stats.hpp"
#include "socrhythm/structure.hpp"

namespace py = pybind11;
using namespace socrhythm;

namespace {

using EventTuple = std::tuple<std::string, std::string, std::int64_t, std::int64_t>;
using EdgeTuple = std::tuple<std::string, std::string, double>;

std::vector<VisitEvent> to_events(const std::vector<EventTuple>& rows) {
  std::vector<VisitEvent> out;
  out.reserve(rows.size());
  for (const auto& [v, o, s, d] : rows) out.push_back({UserId(v), UserId(o), s, d});
  return out;
}

std::vector<EventTuple> from_events(const std::vector<VisitEvent>& events) {
  std::vector<EventTuple> out;
  out.reserve(events.size());
  for (const auto& e : events) out.emplace_back(e.visitor.str(), e.owner.str(), e.start, e.dwell);
  return out;
}

WeightedGraph to_graph(const std::vector<EdgeTuple>& edges, std::int64_t week) {
  GraphBuilder b(WeekIndex{week});
  for (const auto& [a, c, w] : edges) b.add_weight(UserId(a), UserId(c), w);
  return b.build();
}

std::vector<EdgeTuple> from_graph(const WeightedGraph& g) {
  std::vector<EdgeTuple> out;
  for (const auto& e : g.edges()) out.emplace_back(g.node(e.a).str(), g.node(e.b).str(), e.weight);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weekly social rhythms, weighted contact networks and a coupled-oscillator simulator.";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def(
      "parse_events",
      [](const std::string& text) {
        std::istringstream in(text);
        const auto r = parse_events(in);
        std::vector<std::pair<std::size_t, std::string>> diags;
        for (const auto& d : r.diagnostics) diags.emplace_back(d.line, d.message);
        return std::make_pair(from_events(r.events), diags);
      },
      py::arg("text"), "Parse event CSV text. Returns (events, [(line, message)]).");

  m.def("dft168", [](const std::vector<double>& x) { return dft168(x); }, py::arg("series"));
  m.def("retained_bins", [] {
    const auto& r = retained_bins();
    return std::vector<int>(r.begin(), r.end());
  });
  m.def(
      "rhythm_of_week",
      [](const std::vector<double>& minutes) {
        if (minutes.size() != kHoursPerWeek) throw Error(Errc::WrongLength, "expected 168 values");
        WeeklyUsageSeries s{UserId("_"), WeekIndex{0}, {}};
        std::copy(minutes.begin(), minutes.end(), s.minutes.begin());
        return rhythm_of_week(s).values;
      },
      py::arg("minutes"), "Unit 24-hour rhythm vector of one week of hourly usage minutes.");
  m.def(
      "similarity", [](const Profile24& a, const Profile24& b) { return similarity(a, b); }, py::arg("a"), py::arg("b"));

  m.def(
      "extract_rhythms",
      [](const std::vector<EventTuple>& events, std::int64_t weeks, EpochSeconds origin, int utc_offset_hours) {
        const auto ex = extract_rhythms(to_events(events), WeekClock{origin, utc_offset_hours}, weeks);
        std::map<std::pair<std::int64_t, std::string>, Profile24> out;
        for (const auto* r : ex.table.rows()) out[{r->week.value, r->user.str()}] = r->values;
        return out;
      },
      py::arg("events"), py::arg("weeks"), py::arg("origin") = 0, py::arg("utc_offset_hours") = 9,
      "Rhythm vectors keyed by (week, user).");

  m.def(
      "build_week_network",
      [](const std::vector<EventTuple>& events, std::int64_t week, EpochSeconds origin, int utc_offset_hours) {
        return from_graph(build_week_network(to_events(events), WeekIndex{week}, WeekClock{origin, utc_offset_hours}));
      },
      py::arg("events"), py::arg("week"), py::arg("origin") = 0, py::arg("utc_offset_hours") = 9,
      "Undirected edges (user_a, user_b, seconds) for one week.");

  m.def(
      "weighted_clustering",
      [](const std::vector<EdgeTuple>& edges) {
        const auto g = to_graph(edges, 0);
        const auto c = weighted_clustering_all(g);
        std::map<std::string, double> out;
        for (NodeIndex i = 0; i < g.node_count(); ++i) out[g.node(i).str()] = c[i];
        return out;
      },
      py::arg("edges"));

  m.def(
      "detect_communities",
      [](const std::vector<EdgeTuple>& edges, std::uint64_t seed) {
        const auto g = to_graph(edges, 0);
        const auto p = detect_communities(g, seed);
        std::vector<std::vector<std::string>> out;
        for (const auto& members : p.members) {
          auto& names = out.emplace_back();
          for (auto v : members) names.push_back(g.node(v).str());
        }
        return out;
      },
      py::arg("edges"), py::arg("seed") = 0);

  m.def(
      "weighted_distances",
      [](const std::vector<EdgeTuple>& edges, const std::string& source, bool hops) {
        const auto g = to_graph(edges, 0);
        const auto d = hops ? hop_sssp(g, UserId(source)) : weighted_sssp(g, UserId(source));
        std::map<std::string, double> out;
        for (NodeIndex i = 0; i < g.node_count(); ++i) {
          if (d.reachable(i)) out[g.node(i).str()] = d.distance[i];
        }
        return out;
      },
      py::arg("edges"), py::arg("source"), py::arg("hops") = false,
      "Shortest-path distances with edge length 1/w (or hop counts). Unreachable nodes are absent.");

  m.def(
      "welch_t",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto r = stats::welch_t(x, y);
        return py::dict(py::arg("t") = r.t, py::arg("dof") = r.dof, py::arg("p") = r.p,
                        py::arg("mean_difference") = r.mean_difference);
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "powerlaw_mle", [](const std::vector<std::int64_t>& degrees, std::int64_t kmin) { return powerlaw_mle(degrees, kmin); },
      py::arg("degrees"), py::arg("kmin") = 2);

  m.def(
      "lock_condition_two", &lock_condition_two, py::arg("delta_omega"), py::arg("k"));
  m.def(
      "run_two_oscillator",
      [](double delta_omega, double k, double days) {
        const auto r = run_two_oscillator({delta_omega, k, days});
        return py::dict(py::arg("locked") = r.locked, py::arg("final_gap") = r.final_gap,
                        py::arg("late_drift") = r.late_drift);
      },
      py::arg("delta_omega"), py::arg("k"), py::arg("days") = 400.0);

  m.def(
      "simulate",
      [](std::size_t population, std::int64_t weeks, std::uint64_t seed, double kappa) {
        SimConfig c;
        c.population = population;
        c.weeks = weeks;
        c.seed = seed;
        c.kappa = kappa;
        const auto out = run_simulation(c);
        std::vector<std::tuple<std::int64_t, std::string, double>> phases;
        for (const auto& p : out.phases) phases.emplace_back(p.week, p.user.str(), p.phase_hours);
        return py::dict(py::arg("events") = from_events(out.events), py::arg("phases") = phases);
      },
      py::arg("population") = 200, py::arg("weeks") = 2, py::arg("seed") = 1, py::arg("kappa") = SimConfig{}.kappa,
      "Run the population simulator with default settings otherwise.");
}
