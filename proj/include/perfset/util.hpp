#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perfset::util {

// Stable 64-bit FNV-1a. std::hash is not guaranteed stable across processes,
// and fingerprints end up in artifact files.
std::uint64_t fnv1a(std::string_view data);
std::string fnv1a_hex(std::string_view data);

// Collapses every run of whitespace to a single space and trims the ends.
std::string collapse_whitespace(std::string_view text);

std::string to_lower(std::string_view text);
bool starts_with(std::string_view text, std::string_view prefix);
std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

// Fixed-point rendering with round-half-even, preserving a negative sign on
// values that round to zero ("-0.0"). Report tables depend on this exact
// behavior.
std::string format_fixed(double value, int places);

std::string read_file(const std::string& path);
std::optional<std::string> try_read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Last `max_bytes` of a file; used for stdout/stderr tails.
std::string read_file_tail(const std::string& path, std::size_t max_bytes);

int count_lines(std::string_view text);

// Replaces every occurrence of `placeholder` in `text`.
std::string replace_all(std::string text, std::string_view placeholder, std::string_view value);

}  // namespace perfset::util
