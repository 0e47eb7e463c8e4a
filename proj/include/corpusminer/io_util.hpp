#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cm {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Reads non-empty lines, trimming trailing '\r'. Lines starting with '#'
/// are skipped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// FNV-1a 64-bit over a byte string; used for stage cache keys.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
std::string hash_file_hex(const std::filesystem::path& path);

/// Splits one CSV line; handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
/// Quotes a field if it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

/// Fixed-format floating point for deterministic text outputs.
std::string format_double(double v, int precision = 6);

}  // namespace cm
