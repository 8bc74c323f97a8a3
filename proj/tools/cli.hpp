#pragma once

#include <iosfwd>

namespace curvefem::cli {

/// Runs the command line. Returns 0 on success, 2 on usage errors and 1 when
/// the computation fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvefem::cli
