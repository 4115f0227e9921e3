#pragma once

#include <string>
#include <string_view>

#include "trunctail/burr.hpp"

namespace trunctail {

/// Reads an `x,y` CSV of observed pairs. Every row needs 0 < x <= y with
/// finite decimal values; violations raise InputError carrying the 1-based
/// line number.
TruncatedSample read_pairs_csv(std::string_view text);

/// Header plus one `x,y` row per pair, shortest round-trip decimals, LF endings.
std::string write_pairs_csv(const TruncatedSample& sample);

}  // namespace trunctail
