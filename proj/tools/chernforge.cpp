#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chernforge/cli/commands.hpp"

int main(int argc, char **argv) {
  CLI::App app{"chernforge: Pontrjagin forms, sums of squares of exact 2-forms, and the minor lemma"};
  app.require_subcommand(1);
  chernforge::cli::Flags flags;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", flags.config, "JSON job file");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--grid", flags.grid, "points per axis");
    sub->add_option("--q", flags.q, "tuple length");
    sub->add_option("--tol", flags.tol, "relative residual target");
    sub->add_option("--out", flags.out, "artifact directory");
  };

  struct Entry {
    const char *name;
    const char *help;
  };
  const Entry entries[] = {
      {"verify", "run the property suites"},
      {"gen-tuple", "generate a certified regular null tuple"},
      {"decompose", "write an exact 4-form as a sum of squares of exact 2-forms"},
      {"dbar", "write a 3-form as sum w_i ^ d w_i plus an exact form"},
      {"realize", "realize an exact 4-form as the first Pontrjagin form of a connection"},
      {"lemma", "check irreducibility of minor determinants, or run the rank Monte Carlo"},
      {"bounds", "evaluate the dimension bounds"},
  };
  std::string chosen;
  for (const auto &e : entries) {
    CLI::App *sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    const std::string name = e.name;
    if (name == "verify") {
      sub->add_option("--only", flags.only, "comma-separated suite names");
      sub->add_option("--inject-fault", flags.fault)->group("");
    }
    if (name == "gen-tuple" || name == "lemma" || name == "bounds") sub->add_option("--m", flags.m, "torus dimension");
    if (name == "bounds") sub->add_option("--k", flags.k, "rank for the universal-bundle bound");
    if (name == "lemma") sub->add_option("--mode", flags.mode, "symbolic | monte-carlo");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : chernforge::cli::kValidation;
  }
  return chernforge::cli::run_command(chosen, flags, std::cout, std::cerr);
}
