#pragma once

namespace hintrl::cli {

// Full command-line entry point (train / grid / eval-hints / rollout /
// plot). Returns the process exit code: 0 success, 1 runtime failure,
// 2 configuration or usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace hintrl::cli
