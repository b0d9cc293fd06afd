#include <doctest.h>

#include <random>

#include "chernforge/errors.hpp"
#include "chernforge/fppoly.hpp"
#include "chernforge/minorlemma.hpp"
#include "oracles.hpp"

using namespace chernforge;

namespace {

FpPoly var(int i) { return FpPoly::variable(i); }

std::vector<std::uint64_t> random_point(std::size_t n, std::mt19937_64 &rng) {
  std::vector<std::uint64_t> pt(n);
  for (auto &v : pt) v = fp_random_nonzero(rng);
  return pt;
}

// Evaluates the Plucker matrix entries directly from their definition.
std::uint64_t entry_value(const PluckerMatrix &pm, int row, int col, const std::vector<std::uint64_t> &pt) {
  int i = 0;
  for (int k1 = 0; k1 < pm.n; ++k1)
    for (int k2 = k1 + 1; k2 < pm.n; ++k2, ++i)
      if (i == row)
        return fp_sub(fp_mul(pt[pm.var_x(col, k1)], pt[pm.var_xbar(col, k2)]),
                      fp_mul(pt[pm.var_x(col, k2)], pt[pm.var_xbar(col, k1)]));
  return 0;
}

} // namespace

TEST_SUITE("minorlemma") {

TEST_CASE("field arithmetic") {
  CHECK(fp_add(kFieldPrime - 1, 1) == 0);
  CHECK(fp_sub(0, 1) == kFieldPrime - 1);
  CHECK(fp_mul(kFieldPrime - 1, kFieldPrime - 1) == 1);
  CHECK(fp_from_int(-3) == kFieldPrime - 3);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t a = fp_random_nonzero(rng);
    CHECK(fp_mul(a, fp_inv(a)) == 1);
    CHECK(fp_pow(a, kFieldPrime - 1) == 1);
    const unsigned __int128 wide = static_cast<unsigned __int128>(a) * (a >> 3);
    CHECK(fp_mul(a, a >> 3) == static_cast<std::uint64_t>(wide % kFieldPrime));
  }
}

TEST_CASE("polynomial arithmetic evaluates consistently") {
  std::mt19937_64 rng(2);
  const FpPoly p = var(0) * var(1) + var(2).scaled(fp_from_int(-3)) + FpPoly::constant(5);
  const FpPoly q = var(1) * var(1) - var(0);
  for (int t = 0; t < 20; ++t) {
    const auto pt = random_point(3, rng);
    CHECK((p * q).eval(pt) == fp_mul(p.eval(pt), q.eval(pt)));
    CHECK((p + q).eval(pt) == fp_add(p.eval(pt), q.eval(pt)));
    CHECK((p - q).eval(pt) == fp_sub(p.eval(pt), q.eval(pt)));
  }
  CHECK((p - p).is_zero());
  CHECK((p * q).total_degree() == 4);
  CHECK(p.variables() == std::vector<int>{0, 1, 2});
  CHECK(to_string(var(0) * var(1), {"a", "b"}).find("a") != std::string::npos);
  FpPoly big = var(0);
  for (int i = 0; i < 14; ++i) big = big * var(0);
  CHECK_THROWS_AS(big * big, BudgetExceeded);
}

TEST_CASE("plucker matrix") {
  const PluckerMatrix a = plucker_matrix(2, 1);
  CHECK(a.rows == 1);
  CHECK(a.entries[0][0] == var(0) * var(3) - var(1) * var(2));
  const PluckerMatrix b = plucker_matrix(3, 3);
  CHECK(b.rows == 3);
  for (const auto &row : b.entries)
    for (const auto &e : row) CHECK(e.total_degree() == 2);
  CHECK(b.names[b.var_xbar(2, 1)] == "xbar3_2");
  CHECK_THROWS_AS(plucker_matrix(5, 10), BudgetExceeded);
  CHECK_THROWS_AS(plucker_matrix(1, 1), ValidationError);
}

TEST_CASE("symbolic determinant against numeric elimination") {
  std::mt19937_64 rng(3);
  for (int n : {2, 3}) {
    const PluckerMatrix pm = plucker_matrix(n, 4);
    std::vector<int> cols(pm.rows);
    for (int i = 0; i < pm.rows; ++i) cols[i] = (i * 3 + 1) % 4;
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    if (static_cast<int>(cols.size()) != pm.rows) {
      cols.resize(pm.rows);
      std::iota(cols.begin(), cols.end(), 0);
    }
    const FpPoly det = symbolic_det(pm, cols);
    for (int t = 0; t < 10; ++t) {
      const auto pt = random_point(pm.names.size(), rng);
      std::vector<std::vector<std::uint64_t>> m(pm.rows, std::vector<std::uint64_t>(pm.rows));
      for (int r = 0; r < pm.rows; ++r)
        for (int c = 0; c < pm.rows; ++c) m[r][c] = entry_value(pm, r, cols[c], pt);
      CHECK(det.eval(pt) == oracle::fp_det(m));
    }
  }
  const PluckerMatrix pm = plucker_matrix(3, 3);
  CHECK(symbolic_det(pm, {0, 0, 1}).is_zero());
  CHECK_THROWS_AS(symbolic_det(pm, {0, 1}), ValidationError);
}

TEST_CASE("multilinearity") {
  CHECK(multilinearity_check(symbolic_det(plucker_matrix(3, 3), {0, 1, 2})));
  CHECK_FALSE(multilinearity_check(var(0) * var(0)));
  CHECK(multilinearity_check(FpPoly::constant(7)));
}

TEST_CASE("factor components") {
  const FactorReport adbc = factor_components(var(0) * var(3) - var(1) * var(2), 2, 1);
  CHECK(adbc.irreducible);
  CHECK(adbc.verdict == "irreducible");
  CHECK(adbc.components.size() == 1);

  const FpPoly witness = (var(0) * var(1) + var(2) * var(3)) * (var(4) * var(5) + var(6) * var(7));
  const FactorReport w = factor_components(witness, 2, 1);
  CHECK_FALSE(w.irreducible);
  CHECK(w.verdict == "splits");
  REQUIRE(w.components.size() == 2);
  CHECK(w.components[0] == std::vector<int>{0, 1, 2, 3});
  CHECK(w.components[1] == std::vector<int>{4, 5, 6, 7});
  CHECK(w.error_bound < 1e-12);

  // A monomial factor is split off up front.
  const FactorReport mono = factor_components(var(0) * (var(1) * var(2) + var(3) * var(4)), 2, 1);
  CHECK_FALSE(mono.irreducible);
  CHECK(mono.monomial_factors == std::vector<int>{0});

  CHECK(factor_components(symbolic_det(plucker_matrix(3, 3), {0, 1, 2}), 2, 5).irreducible);
}

TEST_CASE("lemma suite") {
  const LemmaReport r = lemma_suite(3, 4, 2, 1);
  CHECK(r.subsets.size() == 4);
  CHECK(r.all_multilinear);
  CHECK(r.all_nonzero);
  CHECK(r.all_irreducible);
  CHECK(r.error_bound < 1e-12);
  CHECK(r.family_support_disjoint);
  const LemmaReport two = lemma_suite(2, 2, 2, 1);
  CHECK(two.subsets.size() == 2);
  CHECK(two.all_irreducible);
  const LemmaReport one = lemma_suite(3, 4, 2, 1, {0, 2, 3});
  CHECK(one.subsets.size() == 1);
  CHECK_THROWS_AS(lemma_suite(5, 10, 2, 1), BudgetExceeded);
  CHECK_THROWS_AS(lemma_suite(3, 2, 2, 1), ValidationError);
}

TEST_CASE("rank over F_p") {
  CHECK(fp_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(fp_rank({{1, 0}, {0, 1}}) == 2);
  CHECK(fp_rank({}) == 0);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> u(-3, 3);
  for (int t = 0; t < 30; ++t) {
    Eigen::MatrixXd m(4, 6);
    std::vector<std::vector<std::uint64_t>> f(4, std::vector<std::uint64_t>(6));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) {
        const int v = (j < 3 || t % 2 == 0) ? u(rng) : static_cast<int>(m(i, j - 3));
        m(i, j) = v;
        f[i][j] = fp_from_int(v);
      }
    CHECK(fp_rank(f) == static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank()));
  }
}

TEST_CASE("codimension Monte Carlo") {
  const CodimReport r = codim_monte_carlo(3, 6, 100, 1);
  CHECK(r.target_rank == 3);
  CHECK(r.fraction == 1.0);
  CHECK(codim_monte_carlo(4, 5, 50, 1).fraction == 0.0);
  CHECK(codim_monte_carlo(4, 10, 50, 2).fraction == 1.0);
}

}
