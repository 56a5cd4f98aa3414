#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Minimal CSV helpers: comma separated, optional double quotes, no embedded newlines.
namespace vfdr::csv {

std::string_view trim(std::string_view s);

/// Splits one record. Quoted fields may contain commas and doubled quotes.
/// Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split(std::string_view line);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string escape(std::string_view field);

/// Strict decimal parse of the whole (trimmed) field.
std::optional<double> parse_double(std::string_view field);

/// "%.{significant}g"; 17 or more gives the shortest exactly round-tripping form.
std::string format_number(double v, int significant = 17);

}  // namespace vfdr::csv
