#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace fgld {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_shortest(double value);

/// Shortest round-trip text in plain positional notation (no exponent).
std::string format_decimal(double value);

/// Fixed-point text with `digits` decimals; negative zero prints as zero.
std::string format_fixed(double value, int digits);

/// Parses "0.25", "1", "-3e-2" or a fraction "10/7". Rejects trailing text.
std::optional<double> parse_exact_number(std::string_view text);

}  // namespace fgld
