#include "fgld/numeric_text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace fgld {

std::string format_shortest(double value) {
  std::array<char, 64> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) {
    return "nan";
  }
  return std::string(buffer.data(), end);
}

std::string format_decimal(double value) {
  std::array<char, 512> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                 std::chars_format::fixed);
  if (ec != std::errc{}) {
    return format_shortest(value);
  }
  return std::string(buffer.data(), end);
}

std::string format_fixed(double value, int digits) {
  if (value == 0.0) {
    value = 0.0;
  }
  std::array<char, 64> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                 std::chars_format::fixed, digits);
  if (ec != std::errc{}) {
    return "nan";
  }
  std::string text(buffer.data(), end);
  // Values that round to zero keep their sign in to_chars.
  if (text.front() == '-' && text.find_first_not_of("-0.") == std::string::npos) {
    text.erase(0, 1);
  }
  return text;
}

namespace {

std::optional<double> parse_plain(std::string_view text) {
  if (text.empty()) {
    return std::nullopt;
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::optional<double> parse_exact_number(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return parse_plain(text);
  }
  const auto numerator = parse_plain(text.substr(0, slash));
  const auto denominator = parse_plain(text.substr(slash + 1));
  if (!numerator || !denominator || *denominator == 0.0) {
    return std::nullopt;
  }
  return *numerator / *denominator;
}

}  // namespace fgld
