#pragma once

// Property suites run by `verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "chernforge/json_io.hpp"

namespace chernforge::cli {

struct Check {
  std::string name;
  double value = 0.0;     // measured quantity (a residual unless noted)
  double threshold = 0.0; // pass iff value < threshold, or value == threshold for exact counts
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool pass = true;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int n = 16;
  bool broken_normalization = false;
};

const std::vector<std::string> &suite_names();
// Throws ValidationError for an unknown suite name.
SuiteResult run_suite(const std::string &name, const VerifyOptions &opts);

Json to_json(const SuiteResult &r);

} // namespace chernforge::cli
