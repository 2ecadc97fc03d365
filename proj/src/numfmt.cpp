#include "lieavg/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lieavg {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", x);
  std::string s(buf);
  const auto epos = s.find('e');
  if (epos == std::string::npos) return s;
  std::string mant = s.substr(0, epos);
  int ex = std::stoi(s.substr(epos + 1));
  return mant + "e" + std::to_string(ex);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

}  // namespace lieavg
