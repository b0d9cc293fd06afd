#pragma once

#include <optional>
#include <string>
#include <vector>

namespace chernforge {

// Dimension bounds. Rational thresholds are converted with the rounding named
// in `conventions`.
struct BoundsReport {
  int m = 0;
  int k = 1;
  long long q_min = 0;            // m(m+1)/2
  long long secondary_k = 0;      // ceil(m(m+1)/4)
  long long exact_char_n = 0;     // ceil(m(m+1)/6)
  long long m0 = 0;               // floor((m+1)/4) - 1
  double theorem_threshold = 0.0; // m0 + m(m+1)/6, strict lower bound on n
  long long theorem_min_n = 0;    // smallest integer n above the threshold
  long long schlafly_n = 0;       // k(m+1)(4mk^2 + 2mk + 1)
  bool m0_negative = false;
  bool headline_bounds_unspecified = true;
  std::vector<std::string> conventions;
};

// Throws ValidationError for m < 1 or k < 1.
BoundsReport compute_bounds(int m, std::optional<int> k = std::nullopt);

} // namespace chernforge
