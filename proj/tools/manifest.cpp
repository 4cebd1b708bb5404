#include "manifest.hpp"

#include <openssl/evp.h>

#include "json.hpp"

#include "socrhythm/csv.hpp"
#include "socrhythm/errors.hpp"

#ifndef SOCRHYTHM_VERSION
#define SOCRHYTHM_VERSION "0.0.0"
#endif

namespace socrhythm::cli {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::Io, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(csv::read_file(path)); }

Manifest::Manifest(std::string command, std::vector<std::string> args)
    : command_(std::move(command)), args_(std::move(args)) {}

void Manifest::set_config(std::string_view canonical_json) { config_digest_ = sha256_hex(canonical_json); }

void Manifest::add_input(const std::filesystem::path& path) { inputs_[path.string()] = sha256_file(path); }

void Manifest::add_output(const std::string& name, std::string_view content) { outputs_[name] = sha256_hex(content); }

void Manifest::add_timing(const std::string& stage, double milliseconds) { timings_.emplace_back(stage, milliseconds); }

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "socrhythm";
  j["version"] = SOCRHYTHM_VERSION;
  j["command"] = command_;
  j["args"] = args_;
  j["seed"] = has_seed_ ? nlohmann::ordered_json(seed_) : nlohmann::ordered_json(nullptr);
  j["config_sha256"] = config_digest_.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(config_digest_);
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["warnings"] = warnings_;
  auto& t = j["timings_ms"] = nlohmann::ordered_json::object();
  for (const auto& [stage, ms] : timings_) t[stage] = ms;
  return j.dump(2) + "\n";
}

void Manifest::write(const std::filesystem::path& out_dir) const {
  csv::write_file_atomic(out_dir / "manifest.json", to_json());
}

}  // namespace socrhythm::cli
