#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace socrhythm::csv {

/// Splits on commas; no quoting (fields are ids and numbers).
std::vector<std::string_view> split(std::string_view line);

/// Strips a trailing '\r' and surrounding blanks.
std::string_view trim(std::string_view s);

std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Shortest round-trip text for finite values (17 significant digits max).
std::string format_double(double v);
/// Fixed 17-significant-digit text, used by the rhythm export.
std::string format_double17(double v);

/// Writes `content` to `path` through a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace socrhythm::csv
