#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"
#include "doctest.h"
#include "json.hpp"
#include "socrhythm/csv.hpp"
#include "socrhythm/eventlog.hpp"

using namespace socrhythm;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory, removed on scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("socrhythm_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::size_t data_rows(const std::string& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  std::size_t n = 0;
  std::getline(in, line);
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

nlohmann::json manifest(const TempDir& d) { return nlohmann::json::parse(csv::read_file(d / "manifest.json")); }

const char* kSmallConfig = R"({"population": 60, "weeks": 3, "warmup_days": 2, "circle_size_min": 5,
  "circle_size_max": 12, "closed_triads": 4, "open_triads": 4, "seed": 7})";

}  // namespace

TEST_CASE("cli usage errors") {
  CHECK(cli::run(std::vector<std::string>{}) == cli::kUsage);
  CHECK(cli::run({"bogus"}) == cli::kUsage);
  CHECK(cli::run({"rhythms"}) == cli::kUsage);
  CHECK(cli::run({"--help"}) == cli::kOk);
  TempDir d("usage");
  CHECK(cli::run({"analyze", "nonsense", "--out", d.path.string()}) == cli::kUsage);
  CHECK(cli::run({"analyze", "distance", "--mode", "bad", "--out", d.path.string()}) == cli::kUsage);
  CHECK(cli::run({"rhythms", "--events", d / "missing.csv", "--out", d.path.string()}) == cli::kRuntime);
  CHECK(cli::run({"analyze", "edge-weight", "--out", d.path.string()}) == cli::kRuntime);
}

TEST_CASE("simulate rejects an invalid config naming the field") {
  TempDir d("badconfig");
  write(d / "c.json", R"({"weeks": 1})");
  CHECK(cli::run({"simulate", "--config", d / "c.json", "--out", d.path.string()}) == cli::kUsage);
  write(d / "c.json", R"({"weeks": 3, "nonsense": true})");
  CHECK(cli::run({"simulate", "--config", d / "c.json", "--out", d.path.string()}) == cli::kUsage);
  write(d / "c.json", "{not json");
  CHECK(cli::run({"simulate", "--config", d / "c.json", "--out", d.path.string()}) == cli::kUsage);
  CHECK(cli::run({"simulate", "--config", d / "absent.json", "--out", d.path.string()}) == cli::kUsage);
  CHECK_FALSE(fs::exists(d / "events.csv"));

  try {
    cli::parse_config(R"({"weeks": 1})");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidConfig);
    CHECK(std::string(e.what()).find("weeks") != std::string::npos);
  }
}

TEST_CASE("config schema and round trip") {
  const auto rc = cli::parse_config(R"({"scenario": "triad", "weeks": 2, "triad": {"topology": "open", "circle": 4},
    "schedule": [{"week": 1, "a": "A", "b": "B"}], "clock": {"utc_offset_hours": 0}})");
  REQUIRE(rc.triad.has_value());
  CHECK(rc.triad->topology == TriadTopology::OpenPath);
  CHECK(rc.triad->circle == 4);
  CHECK(rc.sim.clock.utc_offset_hours == 0);
  CHECK(rc.sim.schedule.size() == 1);
  const auto j = cli::to_json(rc);
  CHECK(cli::schema_errors(j, cli::simconfig_schema()).empty());
  const auto again = cli::parse_config(j.dump());
  CHECK(cli::to_json(again) == j);

  CHECK_FALSE(cli::schema_errors(nlohmann::json::parse(R"({"kappa": "x"})"), cli::simconfig_schema()).empty());
  CHECK_FALSE(cli::schema_errors(nlohmann::json::parse(R"({"scenario": "mesh"})"), cli::simconfig_schema()).empty());
  CHECK_FALSE(cli::schema_errors(nlohmann::json::parse(R"({"schedule": [{"week": 1}]})"), cli::simconfig_schema()).empty());
}

TEST_CASE("simulate outputs and digests") {
  TempDir a("sim_a"), b("sim_b");
  write(a / "c.json", kSmallConfig);
  REQUIRE(cli::run({"simulate", "--config", a / "c.json", "--out", a.path.string()}) == cli::kOk);
  REQUIRE(cli::run({"simulate", "--config", a / "c.json", "--out", b.path.string()}) == cli::kOk);
  for (const char* f : {"events.csv", "phases.csv", "truth_graph.csv", "schedule.csv", "config.json", "manifest.json"}) {
    CHECK(fs::file_size(a / f) > 0);
  }
  const auto ma = manifest(a), mb = manifest(b);
  CHECK(ma["outputs"] == mb["outputs"]);
  CHECK(ma["config_sha256"] == mb["config_sha256"]);
  CHECK(ma["seed"] == 7);
  const auto cfg = nlohmann::json::parse(csv::read_file(a / "config.json"));
  CHECK(cli::schema_errors(cfg, cli::simconfig_schema()).empty());
  CHECK(data_rows(a / "phases.csv") == 60 * 3);

  TempDir c("sim_c");
  REQUIRE(cli::run({"simulate", "--config", a / "c.json", "--seed", "8", "--out", c.path.string()}) == cli::kOk);
  CHECK(manifest(c)["outputs"]["events.csv"] != ma["outputs"]["events.csv"]);
}

TEST_CASE("rhythms on simulated and malformed logs") {
  TempDir d("rhythms");
  write(d / "c.json", kSmallConfig);
  REQUIRE(cli::run({"simulate", "--config", d / "c.json", "--out", d.path.string()}) == cli::kOk);
  REQUIRE(cli::run({"rhythms", "--events", d / "events.csv", "--out", d.path.string()}) == cli::kOk);
  // active user-weeks straight from the event intervals
  const auto ev = parse_events_file(d / "events.csv").events;
  const WeekClock clock{0, 9};
  std::set<std::pair<std::int64_t, std::string>> active;
  for (const auto& e : ev) {
    for (std::int64_t w = 0; w < 3; ++w) {
      const auto lo = clock.week_start(WeekIndex{w});
      if (e.start < lo + kSecondsPerWeek && e.end() > lo) {
        active.emplace(w, e.visitor.str());
        active.emplace(w, e.owner.str());
      }
    }
  }
  CHECK(data_rows(d / "rhythms.csv") + data_rows(d / "skipped.csv") >= active.size());
  CHECK(data_rows(d / "rhythms.csv") == active.size());
  CHECK(manifest(d)["warnings"] == 0);

  TempDir m("malformed");
  write(m / "e.csv", "visitor,owner,start_epoch_s,dwell_s\nu1,u2,0,600\nu1,u2,zz,600\nu2,u3,4000,100\n");
  CHECK(cli::run({"rhythms", "--events", m / "e.csv", "--out", m.path.string()}) == cli::kOk);
  CHECK(manifest(m)["warnings"] == 1);

  TempDir e("empty");
  write(e / "e.csv", "");
  CHECK(cli::run({"rhythms", "--events", e / "e.csv", "--out", e.path.string()}) == cli::kOk);
  CHECK(data_rows(e / "rhythms.csv") == 0);
  CHECK(data_rows(e / "skipped.csv") == 0);
}

TEST_CASE("network and analyses") {
  TempDir d("analyze");
  write(d / "c.json", kSmallConfig);
  REQUIRE(cli::run({"simulate", "--config", d / "c.json", "--out", d.path.string()}) == cli::kOk);
  REQUIRE(cli::run({"rhythms", "--events", d / "events.csv", "--out", d.path.string()}) == cli::kOk);
  REQUIRE(cli::run({"network", "--events", d / "events.csv", "--null", "--out", d.path.string()}) == cli::kOk);
  CHECK(data_rows(d / "network_summary.csv") == 3);
  CHECK(data_rows(d / "null_network.csv") == data_rows(d / "network.csv"));

  REQUIRE(cli::run({"analyze", "edge-weight", "--out", d.path.string()}) == cli::kOk);
  CHECK(data_rows(d / "edge_weight.csv") == 40);
  CHECK(fs::file_size(d / "edge_weight.svg") > 0);

  REQUIRE(cli::run({"analyze", "distance", "--mode", "hops", "--out", d.path.string()}) == cli::kOk);
  CHECK(data_rows(d / "distance_hops_curve.csv") > 0);
  CHECK(data_rows(d / "distance_hops_reach.csv") > 0);
  for (const char* k : {"entrainment", "communities", "distance"}) {
    CHECK(cli::run({"analyze", k, "--out", d.path.string()}) == cli::kOk);
  }
  CHECK(fs::exists(d / "community_members.csv"));
}

TEST_CASE("triads on a scheduled closure scenario covers every condition") {
  TempDir d("triads");
  write(d / "c.json", R"({"scenario": "triad", "weeks": 2, "seed": 3, "triad": {"circle": 6}})");
  REQUIRE(cli::run({"simulate", "--config", d / "c.json", "--out", d.path.string()}) == cli::kOk);
  REQUIRE(cli::run({"report", "--events", d / "events.csv", "--out", d.path.string()}) == cli::kOk);
  const auto text = csv::read_file(d / "triads_summary.csv");
  for (const char* cond : {"strong", "weak", "unconnected"}) CHECK(text.find(cond) != std::string::npos);
  CHECK(fs::file_size(d / "report.md") > 0);
}
