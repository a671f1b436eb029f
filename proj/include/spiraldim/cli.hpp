#pragma once

namespace spiraldim {

// Full command-line surface of the tool; argv[0] is the program name.
// Returns the process exit code: 0 only when every validation passed.
int run_cli(int argc, const char* const* argv);

}  // namespace spiraldim
