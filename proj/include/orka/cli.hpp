#pragma once

#include <iosfwd>

namespace orka {

/// Entry point for the `orka` tool. Exit codes: 0 success, 1 runtime failure,
/// 2 usage, configuration or input-parse error (nothing is written).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orka
