#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "maintseg/core.hpp"

namespace maintseg {

/// Parses "YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|+HH:MM|-HH:MM]" or a bare date.
/// Fractional seconds are truncated. Returns nullopt on any malformed input.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

inline constexpr double kSecondsPerDay = 86400.0;

}  // namespace maintseg
