#pragma once

#include <cstdio>
#include <string>

namespace entrate {

/// 14 significant digits, '.' decimal separator regardless of locale-free printf.
inline std::string fmt14(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14g", x);
  return buf;
}

}  // namespace entrate
