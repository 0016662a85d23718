#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace superhedge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerificationFailure = 2;

struct RunConfig {
  std::string command;  // price, dual, verify-duality, ...
  std::string market;
  std::string claim;
  std::string measure;
  std::string utility;
  std::string cone;
  std::vector<std::string> inputs;  // validate
  std::optional<double> tol;
  std::uint64_t seed = 42;
  std::string cone_choice = "C_U";
  std::optional<double> bound;
  double b = 1.0;
  double alpha = 2.0;
  int samples = 100;
  std::vector<int> levels{10, 100, 1000};
  std::string claim_kind = "unbounded";
  double r = 0.9;
  double s0 = 2.0;
  bool text = false;  // render the JSON report as indented key/value lines
};

struct RunResult {
  int exit_code = kExitOk;
  std::string output;  // JSON document (or its text rendering), newline-terminated
};

/// Runs one command. Never throws: module errors become an error report
/// with exit code 1.
RunResult run(const RunConfig& config);

/// Human-readable rendering of a JSON report.
std::string render_text(const std::string& json_text);

}  // namespace superhedge
