#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent parsing and formatting helpers.
namespace trunctail::text {

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);

/// Whole-token parse; rejects trailing garbage, nan and inf.
std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::uint64_t> parse_u64(std::string_view s) noexcept;

/// Fixed-point with `decimals` digits.
std::string fixed(double v, int decimals);
/// Shortest representation that round-trips.
std::string exact(double v);

}  // namespace trunctail::text
