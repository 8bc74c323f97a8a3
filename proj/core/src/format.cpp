#include "curvefem/format.hpp"

#include <cstdio>

namespace curvefem {

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_short(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2e", value);
  return buf;
}

std::string format_rate(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", value);
  return buf;
}

}  // namespace curvefem
