#pragma once

namespace bimu {

// Entry point behind the `bimu` binary. Returns 0 on success, 1 on usage
// errors, 2 on data errors.
int run_cli(int argc, const char* const* argv);

}  // namespace bimu
