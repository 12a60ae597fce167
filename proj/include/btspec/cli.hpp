// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace btspec {

// Exit codes shared by the binary and the in-process test harness.
inline constexpr int kExitOk = 0;         // experiment ran and passed
inline constexpr int kExitError = 1;      // operational failure
inline constexpr int kExitFail = 2;       // a verified bound was violated
inline constexpr int kExitUsage = 64;     // malformed flags or config
inline constexpr int kExitCantWrite = 73; // output location unusable

inline constexpr const char* kToolVersion = "1.0.0";

// Uniform axis given as "start:stop:count".
struct Axis {
  double start = 0.0, stop = 0.0;
  int count = 0;
  static Axis parse(const std::string& text);
  std::vector<double> values() const;
  std::string str() const;
};

// Comma-separated doubles, e.g. "0.08,0.04,0.02".
std::vector<double> parse_double_list(const std::string& text);
// Comma-separated integers.
std::vector<int> parse_int_list(const std::string& text);

// Runs the command line given argv without the program name. Writes outputs
// and a manifest under --out; every experiment accepts --config to rerun
// from a previously emitted manifest, with explicit flags taking precedence.
int run_cli(const std::vector<std::string>& args);

// argv entry point for the binary.
int run_cli(int argc, char** argv);

} // namespace btspec
