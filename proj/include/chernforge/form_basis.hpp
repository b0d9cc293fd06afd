#pragma once

#include <cstddef>
#include <vector>

namespace chernforge {

// Strictly increasing list of 0-based axes.
using FormKey = std::vector<int>;

// Lexicographically ordered basis dx_I of Lambda^p R^m.
struct FormBasis {
  int m = 0;
  int p = 0;
  std::vector<FormKey> keys;
  // Throws DegreeError for keys that are not strictly increasing subsets of [0, m).
  std::size_t index_of(const FormKey &key) const;
};

// Cached; the reference stays valid for the program lifetime.
const FormBasis &form_basis(int m, int p);

// Sign of dx_I ^ dx_J relative to dx_{I u J}; 0 if I and J intersect.
int shuffle_sign(const FormKey &a, const FormKey &b);

FormKey key_union(const FormKey &a, const FormKey &b);

long long binomial(int n, int k);

} // namespace chernforge
