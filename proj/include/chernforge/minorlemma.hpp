#pragma once

// Determinants of matrices of 2x2 minors over F_p: multilinearity and
// irreducibility checks, plus a Monte Carlo rank test for the genericity claim.

#include <cstdint>
#include <string>
#include <vector>

#include "chernforge/fppoly.hpp"

namespace chernforge {

// Column j (0-based) is a generic n x 2 matrix with rows (x^j_k, xbar^j_k).
// Entry (i, j) is the i-th 2x2 minor x^j_{k1} xbar^j_{k2} - x^j_{k2} xbar^j_{k1}
// in lexicographic order of k1 < k2.
struct PluckerMatrix {
  int n = 0;
  int q = 0;
  int rows = 0; // C(n, 2)
  std::vector<std::vector<FpPoly>> entries; // [row][column]
  std::vector<std::string> names;           // variable names, 1-based indices

  int var_x(int column, int k) const { return column * 2 * n + k; }
  int var_xbar(int column, int k) const { return column * 2 * n + n + k; }
};

// Throws ValidationError (n < 2 or q < 1) or BudgetExceeded (C(n,2) > 6 or q > 8).
PluckerMatrix plucker_matrix(int n, int q);

// Determinant of the rows x rows submatrix on `columns` (0-based). Throws
// ValidationError when the subset size differs from the row count.
FpPoly symbolic_det(const PluckerMatrix &m, const std::vector<int> &columns);

bool multilinearity_check(const FpPoly &p);

struct FactorReport {
  bool irreducible = false;
  std::string verdict; // "irreducible" or "splits"
  std::vector<std::vector<int>> components;
  std::vector<int> monomial_factors; // variables divided out up front
  std::size_t pairs_tested = 0;
  std::size_t edges = 0;
  double error_bound = 0.0; // chance that a missing edge is a false negative
};

// Throws InvalidInput when p is zero or not multilinear.
FactorReport factor_components(const FpPoly &p, int trials, std::uint64_t seed);

struct SubsetVerdict {
  std::vector<int> columns;
  bool multilinear = false;
  bool nonzero = false;
  FactorReport factors;
  std::size_t terms = 0;
};

struct LemmaReport {
  int n = 0;
  int q = 0;
  int rows = 0;
  std::vector<SubsetVerdict> subsets;
  bool all_multilinear = true;
  bool all_nonzero = true;
  bool all_irreducible = true;
  double error_bound = 0.0;
  // Determinants on columns {0..N-2, k}: the variables outside the shared
  // columns are exactly column k's, so the family's extra supports are disjoint.
  bool family_support_disjoint = true;
};

// All N-column subsets, or only `only_subset` when non-empty. Throws
// BudgetExceeded for n > 4.
LemmaReport lemma_suite(int n, int q, int trials, std::uint64_t seed, const std::vector<int> &only_subset = {});

struct CodimReport {
  int m = 0;
  int q = 0;
  int trials = 0;
  int target_rank = 0;
  int full_rank = 0;
  int min_rank = 0;
  double fraction = 0.0;
  long long entry_range = 0;
};

// Random integer m x 2 matrices L_1..L_q with entries in [-range, range]; the
// columns of 2x2 minors form a C(m,2) x q matrix whose rank is taken over F_p.
CodimReport codim_monte_carlo(int m, int q, int trials, std::uint64_t seed, long long entry_range = 1000);

// Rank over F_p of a dense matrix given row-major.
int fp_rank(std::vector<std::vector<std::uint64_t>> a);

} // namespace chernforge
