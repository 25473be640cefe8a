#pragma once

#include <cstdio>
#include <string>

namespace wheelins {

// Nine significant digits; the programs never change the C locale.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace wheelins
