#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace liouville {

/// Locale-independent text for a double with 17 significant digits.
/// Non-finite values render as "inf", "-inf" and "nan".
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace liouville
