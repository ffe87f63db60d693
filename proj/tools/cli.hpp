#pragma once

#include <iosfwd>

namespace shearkit::cli {

/// Runs one subcommand. Returns 0 on success, 2 when a certification or
/// verification fails, 1 on usage or input errors. Errors are written to
/// `err` as a single JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shearkit::cli
