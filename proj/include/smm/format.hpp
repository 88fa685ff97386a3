#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

#include "smm/error.hpp"

namespace smm {

/// Shortest decimal that round-trips to the same double. Locale independent.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // fold -0 so output does not depend on signed-zero noise
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Strict full-string parse; `what` names the field in the error.
inline double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
    throw InvalidInput("field '" + std::string(what) + "': expected a finite number, got '" + std::string(s) + "'");
  return v;
}

inline int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end)
    throw InvalidInput("field '" + std::string(what) + "': expected an integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace smm
