#pragma once

#include <cstdio>
#include <string>

namespace zebra::detail {

// 17 significant digits: enough for any double to survive a text round trip.
inline std::string format_17g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace zebra::detail
