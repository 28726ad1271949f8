#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sosmin {

inline const std::vector<std::string> kSubcommands = {"hstar",   "normal",  "classify",  "density",
                                                      "amgm",    "epsilon", "sos-check", "witness"};

struct CommandRequest {
  std::string subcommand;
  std::optional<std::string> input;  // file path, "-" for stdin, or inline JSON
  std::optional<long> k;
  std::optional<long> d;
  std::optional<std::uint64_t> seed;
  std::optional<long> samples;
  std::optional<double> tol;
  bool oracle = false;
  std::optional<std::string> output;  // write the report here instead of stdout
};

struct CommandResult {
  int exit_code = 0;
  std::string output;  // report for stdout
  std::string error;   // message for stderr
};

/// Exit codes: 0 success, 2 invalid request or input, 3 computation failure.
CommandResult run(const CommandRequest& request);

}  // namespace sosmin
