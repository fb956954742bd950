#pragma once

#include <cstdio>
#include <string>

namespace warpgate {

/// Fixed six-decimal rendering used by every text artifact.
inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

}  // namespace warpgate
