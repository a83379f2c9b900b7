#pragma once

#include <cstdio>
#include <string>

namespace qpm {

/// Scientific notation with 12 significant digits, independent of locale.
/// All numeric file output goes through this so identical inputs produce
/// byte-identical files.
inline std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

}  // namespace qpm
