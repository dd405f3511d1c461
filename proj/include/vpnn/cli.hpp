#pragma once

#include <ostream>

namespace vpnn {

/// Entry point of the `vpnn` tool: subcommands synth, train, separate,
/// evaluate and info. Returns 0 on success; on failure writes one line
/// `error: <kind>: <message>` to `err` and returns 1 (2 for usage and
/// configuration errors).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace vpnn
