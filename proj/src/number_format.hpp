#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace andrews3d::detail {

/// `%.{digits}g`-style formatting without locale dependence.
inline void append_number(std::string& out, double value, int digits = 17) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, digits);
  if (ec != std::errc{}) {
    out += "nan";
    return;
  }
  // JSON readers take "-0" for the integer 0 and drop the sign.
  if (value == 0.0 && std::signbit(value)) {
    out += "-0.0";
    return;
  }
  out.append(buf, end);
}

inline std::string format_number(double value, int digits = 17) {
  std::string out;
  append_number(out, value, digits);
  return out;
}

}  // namespace andrews3d::detail
