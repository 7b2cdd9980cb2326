#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mmudn {

/// Shortest decimal text that parses back to exactly `value` ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_double(double value);

/// Strict full-string number parse; throws InvalidInput naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);
std::uint64_t parse_unsigned(std::string_view text, std::string_view what);

std::string_view trim(std::string_view s) noexcept;

}  // namespace mmudn
