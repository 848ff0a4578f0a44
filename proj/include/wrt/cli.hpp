#pragma once
// Command-line front end: simulate, estimate, xcorr, sweep, bench, replay.

#include <string>
#include <vector>

namespace wrt::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // a requested computation failed
inline constexpr int kUsage = 2;   // bad arguments or input files

// args excludes the program name.
int run(const std::vector<std::string>& args);
int main(int argc, char** argv);

std::string version();

} // namespace wrt::cli
