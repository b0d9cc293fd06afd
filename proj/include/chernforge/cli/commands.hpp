#pragma once

#include <exception>
#include <iosfwd>
#include <string>

#include "chernforge/cli/config.hpp"

namespace chernforge::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kValidation = 2,
  kSolverFailure = 3,
  kBudgetRefused = 4,
};

// Maps a library exception onto the documented exit codes.
int exit_code_for(const std::exception &e);

// Each command writes its JSON summary to `out` and artifacts under flags.out.
int cmd_verify(const Flags &flags, std::ostream &out);
int cmd_gen_tuple(const Flags &flags, std::ostream &out);
int cmd_decompose(const Flags &flags, std::ostream &out);
int cmd_dbar(const Flags &flags, std::ostream &out);
int cmd_realize(const Flags &flags, std::ostream &out);
int cmd_lemma(const Flags &flags, std::ostream &out);
int cmd_bounds(const Flags &flags, std::ostream &out);

// Dispatches by subcommand name, converting exceptions to exit codes with a
// one-line JSON error on `err`.
int run_command(const std::string &name, const Flags &flags, std::ostream &out, std::ostream &err);

} // namespace chernforge::cli
