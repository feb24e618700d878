#pragma once

namespace betamorph {

// Entry point of the command-line tool (argv exactly as given to main).
// Exit codes: 0 verdict produced / checks passed, 1 a verify property failed,
// 2 bad input or usage, 3 internal invariant or resource failure.
int run_cli(int argc, const char* const* argv);

}  // namespace betamorph
