#pragma once

#include <string>

namespace lieavg {

/// Shortest decimal representation that parses back to the same double
/// (at most 17 significant digits). Non-finite values print as nan/inf/-inf.
std::string format_double(double x);

/// Compact scientific notation with one decimal, e.g. 0.0e0, 3.2e-13.
std::string format_sci(double x);

/// Parse a double written by format_double. Throws std::invalid_argument.
double parse_double(const std::string& s);

}  // namespace lieavg
