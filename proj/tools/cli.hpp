// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_TOOLS_CLI_HPP_
#define TISIM_TOOLS_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "tisim/types.hpp"

namespace tisim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitLimit = 3,
};

struct CompileOptions {
  std::string input;
  std::string format = "bin";  // bin, hex or apb
  std::string out;             // empty or "-" for stdout
};

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<Cycle> max_cycles;
  std::optional<std::uint64_t> seed;
  bool pair = false;
  std::string trace;  // run only: also write the bus trace here
};

int cmd_compile(const CompileOptions& opt, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);
int cmd_trace(const RunOptions& opt, std::ostream& out, std::ostream& err);

// Parses argv and dispatches. Data goes to `out`, diagnostics to `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tisim::cli

#endif  // TISIM_TOOLS_CLI_HPP_
