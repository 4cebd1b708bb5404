#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "socrhythm/oscillsim.hpp"

namespace socrhythm::cli {

using Json = nlohmann::json;

/// docs/simconfig.schema.json, compiled in.
std::string_view simconfig_schema_text();
const Json& simconfig_schema();

/// Checks `doc` against the subset of JSON Schema the config schema uses:
/// type, enum, properties, required, additionalProperties, items,
/// minItems/maxItems, minLength, minimum/maximum/exclusiveMinimum.
/// Each message starts with the JSON path of the offending value.
std::vector<std::string> schema_errors(const Json& doc, const Json& schema, const std::string& path = "$");

struct RunConfig {
  SimConfig sim;
  std::optional<TriadScenario> triad;  // set when scenario == "triad"
};

/// Parses, schema-checks and range-checks a config document. Throws
/// Error(InvalidConfig) naming the field.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every effective setting, for digests and for echoing into outputs.
Json to_json(const RunConfig& config);

}  // namespace socrhythm::cli
