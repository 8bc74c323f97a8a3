#pragma once

#include <string>

namespace curvefem {

/// 17 significant digits; round-trips a double exactly. Used for all CSV output.
std::string format_full(double value);

/// 3 significant digits in scientific notation for human-readable output.
std::string format_short(double value);

/// 3 significant digits in plain notation, for convergence rates.
std::string format_rate(double value);

}  // namespace curvefem
