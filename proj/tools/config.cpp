#include "config.hpp"

#include <cmath>

#include "socrhythm/csv.hpp"
#include "socrhythm/errors.hpp"

namespace socrhythm::cli {

namespace {

bool has_type(const Json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer() || (v.is_number_float() && std::trunc(v.get<double>()) == v.get<double>());
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  return false;
}

template <typename T>
void take(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

const Json& simconfig_schema() {
  static const Json schema = Json::parse(simconfig_schema_text());
  return schema;
}

std::vector<std::string> schema_errors(const Json& doc, const Json& schema, const std::string& path) {
  std::vector<std::string> errors;
  if (schema.contains("type")) {
    const auto type = schema.at("type").get<std::string>();
    if (!has_type(doc, type)) {
      errors.push_back(path + ": expected " + type);
      return errors;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& option : schema.at("enum")) found = found || option == doc;
    if (!found) errors.push_back(path + ": must be one of " + schema.at("enum").dump());
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (schema.contains("minimum") && v < schema.at("minimum").get<double>()) {
      errors.push_back(path + ": must be >= " + schema.at("minimum").dump());
    }
    if (schema.contains("maximum") && v > schema.at("maximum").get<double>()) {
      errors.push_back(path + ": must be <= " + schema.at("maximum").dump());
    }
    if (schema.contains("exclusiveMinimum") && v <= schema.at("exclusiveMinimum").get<double>()) {
      errors.push_back(path + ": must be > " + schema.at("exclusiveMinimum").dump());
    }
  }
  if (doc.is_string() && schema.contains("minLength") &&
      doc.get<std::string>().size() < schema.at("minLength").get<std::size_t>()) {
    errors.push_back(path + ": too short");
  }
  if (doc.is_array()) {
    if (schema.contains("minItems") && doc.size() < schema.at("minItems").get<std::size_t>()) {
      errors.push_back(path + ": needs at least " + schema.at("minItems").dump() + " items");
    }
    if (schema.contains("maxItems") && doc.size() > schema.at("maxItems").get<std::size_t>()) {
      errors.push_back(path + ": allows at most " + schema.at("maxItems").dump() + " items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        auto sub = schema_errors(doc[i], schema.at("items"), path + "[" + std::to_string(i) + "]");
        errors.insert(errors.end(), sub.begin(), sub.end());
      }
    }
  }
  if (doc.is_object()) {
    const Json empty = Json::object();
    const Json& props = schema.contains("properties") ? schema.at("properties") : empty;
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required")) {
        if (!doc.contains(key.get<std::string>())) errors.push_back(path + "." + key.get<std::string>() + ": required");
      }
    }
    for (const auto& [key, value] : doc.items()) {
      if (props.contains(key)) {
        auto sub = schema_errors(value, props.at(key), path + "." + key);
        errors.insert(errors.end(), sub.begin(), sub.end());
      } else if (schema.value("additionalProperties", true) == false) {
        errors.push_back(path + "." + key + ": unknown field");
      }
    }
  }
  return errors;
}

RunConfig parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::InvalidConfig, std::string("config: not valid JSON (") + e.what() + ")");
  }
  const auto errors = schema_errors(doc, simconfig_schema());
  if (!errors.empty()) {
    std::string msg = errors.front();
    for (std::size_t i = 1; i < errors.size(); ++i) msg += "; " + errors[i];
    throw Error(Errc::InvalidConfig, msg);
  }

  RunConfig rc;
  auto& c = rc.sim;
  take(doc, "population", c.population);
  take(doc, "weeks", c.weeks);
  take(doc, "warmup_days", c.warmup_days);
  take(doc, "kappa", c.kappa);
  take(doc, "theta", c.theta);
  take(doc, "phase_noise", c.phase_noise);
  take(doc, "omega_sd", c.omega_sd);
  take(doc, "circle_omega_sd", c.circle_omega_sd);
  take(doc, "concentration_min", c.concentration_min);
  take(doc, "concentration_max", c.concentration_max);
  take(doc, "sociability_median", c.sociability_median);
  take(doc, "sociability_sigma_log", c.sociability_sigma_log);
  take(doc, "circle_size_min", c.circle_size_min);
  take(doc, "circle_size_max", c.circle_size_max);
  take(doc, "circle_density_min", c.circle_density_min);
  take(doc, "circle_density_max", c.circle_density_max);
  take(doc, "circle_phase_mean", c.circle_phase_mean);
  take(doc, "circle_phase_sd", c.circle_phase_sd);
  take(doc, "member_phase_sd", c.member_phase_sd);
  take(doc, "bridge_ties_per_agent", c.bridge_ties_per_agent);
  take(doc, "tie_strength_min", c.tie_strength_min);
  take(doc, "tie_strength_max", c.tie_strength_max);
  take(doc, "encounter_rate", c.encounter_rate);
  take(doc, "homophily", c.homophily);
  take(doc, "bond_probability", c.bond_probability);
  take(doc, "join_probability", c.join_probability);
  take(doc, "closed_triads", c.closed_triads);
  take(doc, "open_triads", c.open_triads);
  take(doc, "seed", c.seed);
  if (doc.contains("clock")) {
    take(doc["clock"], "origin", c.clock.origin);
    take(doc["clock"], "utc_offset_hours", c.clock.utc_offset_hours);
  }
  if (doc.contains("dwell")) {
    take(doc["dwell"], "median_s", c.dwell.median_s);
    take(doc["dwell"], "sigma_log", c.dwell.sigma_log);
  }
  if (doc.contains("schedule")) {
    for (const auto& s : doc["schedule"]) {
      ScheduledEdge e{UserId(s["a"].get<std::string>()), UserId(s["b"].get<std::string>()), s["week"].get<std::int64_t>(),
                      s.value("strength", 1.0)};
      c.schedule.push_back(std::move(e));
    }
  }
  if (doc.value("scenario", std::string("population")) == "triad") {
    TriadScenario t;
    if (doc.contains("triad")) {
      const auto& j = doc["triad"];
      if (j.contains("topology")) {
        t.topology = j["topology"] == "open" ? TriadTopology::OpenPath : TriadTopology::ClosedTriangle;
      }
      take(j, "ab", t.ab);
      take(j, "ac", t.ac);
      take(j, "bc", t.bc);
      take(j, "circle", t.circle);
      if (j.contains("phases")) {
        for (std::size_t i = 0; i < 3; ++i) t.phases[i] = j["phases"][i].get<double>();
      }
    }
    rc.triad = t;
  }
  c.validate();
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = csv::read_file(path);
  } catch (const Error&) {
    throw Error(Errc::InvalidConfig, "config: cannot read " + path.string());
  }
  return parse_config(text);
}

Json to_json(const RunConfig& rc) {
  const auto& c = rc.sim;
  Json j = Json::object();
  j["scenario"] = rc.triad ? "triad" : "population";
  j["population"] = c.population;
  j["weeks"] = c.weeks;
  j["warmup_days"] = c.warmup_days;
  j["kappa"] = c.kappa;
  j["theta"] = c.theta;
  j["phase_noise"] = c.phase_noise;
  j["omega_sd"] = c.omega_sd;
  j["circle_omega_sd"] = c.circle_omega_sd;
  j["concentration_min"] = c.concentration_min;
  j["concentration_max"] = c.concentration_max;
  j["sociability_median"] = c.sociability_median;
  j["sociability_sigma_log"] = c.sociability_sigma_log;
  j["circle_size_min"] = c.circle_size_min;
  j["circle_size_max"] = c.circle_size_max;
  j["circle_density_min"] = c.circle_density_min;
  j["circle_density_max"] = c.circle_density_max;
  j["circle_phase_mean"] = c.circle_phase_mean;
  j["circle_phase_sd"] = c.circle_phase_sd;
  j["member_phase_sd"] = c.member_phase_sd;
  j["bridge_ties_per_agent"] = c.bridge_ties_per_agent;
  j["tie_strength_min"] = c.tie_strength_min;
  j["tie_strength_max"] = c.tie_strength_max;
  j["encounter_rate"] = c.encounter_rate;
  j["homophily"] = c.homophily;
  j["bond_probability"] = c.bond_probability;
  j["join_probability"] = c.join_probability;
  j["closed_triads"] = c.closed_triads;
  j["open_triads"] = c.open_triads;
  j["seed"] = c.seed;
  j["clock"] = {{"origin", c.clock.origin}, {"utc_offset_hours", c.clock.utc_offset_hours}};
  j["dwell"] = {{"median_s", c.dwell.median_s}, {"sigma_log", c.dwell.sigma_log}};
  j["schedule"] = Json::array();
  for (const auto& s : c.schedule) {
    j["schedule"].push_back({{"week", s.week}, {"a", s.a.str()}, {"b", s.b.str()}, {"strength", s.strength}});
  }
  if (rc.triad) {
    const auto& t = *rc.triad;
    j["triad"] = {{"topology", t.topology == TriadTopology::OpenPath ? "open" : "closed"},
                  {"ab", t.ab},
                  {"ac", t.ac},
                  {"bc", t.bc},
                  {"phases", t.phases},
                  {"circle", t.circle}};
  }
  return j;
}

}  // namespace socrhythm::cli
