#pragma once

#include <string>

namespace msbsde {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_roundtrip(double value);

/// `value` with `digits` significant digits (human-readable output).
std::string format_sig(double value, int digits = 6);

}  // namespace msbsde
