#pragma once

#include <iosfwd>

namespace mottlab {

/// Entry point of the `mottlab` tool. Subcommands: basis, sweep, ground,
/// compare. Returns 0 on success, 1 on usage errors, 2 on runtime errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mottlab
