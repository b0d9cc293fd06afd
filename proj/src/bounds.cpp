#include "chernforge/bounds.hpp"

#include <cmath>

#include "chernforge/errors.hpp"

namespace chernforge {

namespace {
long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }
long long floor_div(long long a, long long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
} // namespace

BoundsReport compute_bounds(int m, std::optional<int> k) {
  if (m < 1) throw ValidationError("bounds: m must be >= 1");
  if (k && *k < 1) throw ValidationError("bounds: k must be >= 1");
  BoundsReport r;
  r.m = m;
  r.k = k.value_or(1);
  const long long mm = static_cast<long long>(m) * (m + 1);
  r.q_min = mm / 2;
  r.secondary_k = ceil_div(mm, 4);
  r.exact_char_n = ceil_div(mm, 6);
  r.m0 = floor_div(m + 1, 4) - 1;
  r.m0_negative = r.m0 < 0;
  r.theorem_threshold = static_cast<double>(r.m0) + static_cast<double>(mm) / 6.0;
  // n > m0 + mm/6  <=>  6n > 6 m0 + mm
  r.theorem_min_n = floor_div(6 * r.m0 + mm, 6) + 1;
  const long long kk = r.k;
  r.schlafly_n = kk * (m + 1) * (4LL * m * kk * kk + 2LL * m * kk + 1);
  r.conventions = {
      "q_min = m(m+1)/2 (always an integer)",
      "secondary_k = ceil(m(m+1)/4)",
      "exact_char_n = ceil(m(m+1)/6), from 3n >= m(m+1)/2",
      "m0 = floor((m+1)/4) - 1; the bracket is read as floor",
      "theorem_min_n = floor(m0 + m(m+1)/6) + 1, the least integer strictly above the threshold",
      "schlafly_n = k(m+1)(4mk^2 + 2mk + 1), default k = 1",
      "the headline immersion theorem states no explicit bounds; only the bounds above are computed",
  };
  if (r.m0_negative) r.conventions.push_back("m0 is negative for this m; the theorem bound is reported as computed");
  return r;
}

} // namespace chernforge
