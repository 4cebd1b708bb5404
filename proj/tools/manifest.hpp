#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace socrhythm::cli {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Run record written next to every command's outputs as manifest.json.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> args);

  void set_seed(std::uint64_t seed) { seed_ = seed; has_seed_ = true; }
  void set_config(std::string_view canonical_json);
  void add_input(const std::filesystem::path& path);
  /// Records the digest of a file the command wrote.
  void add_output(const std::string& name, std::string_view content);
  void add_timing(const std::string& stage, double milliseconds);
  void set_warnings(std::size_t n) { warnings_ = n; }

  std::string to_json() const;
  void write(const std::filesystem::path& out_dir) const;

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::uint64_t seed_ = 0;
  bool has_seed_ = false;
  std::string config_digest_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  std::vector<std::pair<std::string, double>> timings_;
  std::size_t warnings_ = 0;
};

/// Times a scope into a manifest stage.
class StageTimer {
 public:
  StageTimer(Manifest& m, std::string stage) : m_(m), stage_(std::move(stage)), t0_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    m_.add_timing(stage_, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count());
  }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  Manifest& m_;
  std::string stage_;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace socrhythm::cli
