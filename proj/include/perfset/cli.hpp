#pragma once

namespace perfset::cli {

// Full command-line entry point; returns the process exit code
// (0 success, 2 input error, 3 environment error, 4 provider error).
int run(int argc, const char* const* argv);

}  // namespace perfset::cli
