#include <doctest.h>

#include <map>
#include <numbers>

#include "chernforge/chernweil.hpp"
#include "chernforge/errors.hpp"
#include "chernforge/trigspec.hpp"
#include "oracles.hpp"

using namespace chernforge;

namespace {

using cd = std::complex<double>;

DiffForm rf(const TorusGrid &g, std::uint64_t seed, int h = 1) { return random_form(g, 1, h, seed).first; }

// p1 on T^4 recomputed pointwise from the connection's 1-form matrices, with
// entry derivatives from the differentiation-matrix oracle.
DiffForm p1_oracle(const MatrixOneForm &w) {
  const TorusGrid &g = w.grid();
  const int s = w.size();
  // dW as dense per-entry complex 2-forms.
  std::vector<std::vector<DiffForm>> dre(s), dim(s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const ComplexForm *e = w.get(i, j);
      dre[i].push_back(e ? oracle::exterior_d(e->re) : DiffForm(g, 2));
      dim[i].push_back(e ? oracle::exterior_d(e->im) : DiffForm(g, 2));
    }
  const auto &keys2 = form_basis(4, 2).keys;
  const struct {
    FormKey a, b;
    double sign;
  } splits[] = {{{0, 1}, {2, 3}, 1}, {{0, 2}, {1, 3}, -1}, {{0, 3}, {1, 2}, 1},
                {{1, 2}, {0, 3}, 1}, {{1, 3}, {0, 2}, -1}, {{2, 3}, {0, 1}, 1}};
  DiffForm out(g, 4);
  auto vol = out.component({0, 1, 2, 3});
  for (std::size_t p = 0; p < g.points(); ++p) {
    std::vector<Eigen::MatrixXcd> m(4);
    for (int a = 0; a < 4; ++a) m[a] = w.sample(static_cast<std::size_t>(a), p);
    std::map<FormKey, Eigen::MatrixXcd> omega;
    for (std::size_t c = 0; c < keys2.size(); ++c) {
      const int a = keys2[c][0], b = keys2[c][1];
      Eigen::MatrixXcd o = m[a] * m[b] - m[b] * m[a];
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) o(i, j) += cd(dre[i][j].component(c)[p], dim[i][j].component(c)[p]);
      omega[keys2[c]] = o;
    }
    cd tr = 0.0;
    for (const auto &sp : splits) tr += sp.sign * (omega[sp.a] * omega[sp.b]).trace();
    vol[p] = kPontryaginC1 * tr.real();
  }
  return out;
}

TrigSpec witness_spec() {
  // sin(2 pi x1) dx2 + sin(2 pi x3) dx4
  TrigSpec s;
  s.m = 4;
  s.degree = 1;
  s.terms.push_back({{1}, {Harmonic{{1, 0, 0, 0}, 0.0, 1.0}}});
  s.terms.push_back({{3}, {Harmonic{{0, 0, 1, 0}, 0.0, 1.0}}});
  return s;
}

} // namespace

TEST_SUITE("chernweil") {

TEST_CASE("matrix form storage") {
  const TorusGrid g(4, 8);
  MatrixForm a(g, 2, 1);
  CHECK(a.size() == 4);
  CHECK(a.stored_entries() == 0);
  CHECK_FALSE(a.has(0, 1));
  a.at(0, 1).re = rf(g, 1);
  CHECK(a.has(0, 1));
  CHECK(a.stored_entries() == 1);
  CHECK_THROWS_AS(a.set(1, 1, ComplexForm::zero(g, 2)), DegreeError);
  CHECK_THROWS_AS(a.set(1, 1, ComplexForm::zero(TorusGrid(4, 6), 1)), GridMismatch);
  CHECK_THROWS_AS(MatrixForm(g, 0, 1), ValidationError);
}

TEST_CASE("connections are sp(k)-valued") {
  const TorusGrid g(4, 8);
  CHECK(connection_check(sp1_connection(rf(g, 1), rf(g, 2), rf(g, 3))).ok);
  CHECK(connection_check(diag_connection({rf(g, 4), rf(g, 5), rf(g, 6)})).ok);
  CHECK(connection_check(direct_sum(sp1_connection(rf(g, 1), rf(g, 2), rf(g, 3)), diag_connection({rf(g, 4)}))).ok);
  MatrixForm bad(g, 1, 1);
  bad.at(0, 0) = ComplexForm::real(rf(g, 7));
  CHECK_FALSE(connection_check(bad).ok);

  const MatrixOneForm w = sp1_connection(rf(g, 1), DiffForm(g, 1), DiffForm(g, 1));
  CHECK(w.stored_entries() == 2);
  CHECK(sp1_connection(DiffForm(g, 1), DiffForm(g, 1), DiffForm(g, 1)).stored_entries() == 0);
  CHECK_THROWS_AS(diag_connection({}), ValidationError);
}

TEST_CASE("curvature") {
  const TorusGrid g(4, 8);
  CHECK(curvature(zero_connection(g, 2)).sup_norm() == 0.0);
  const DiffForm a = rf(g, 3, 2);
  const MatrixTwoForm om = curvature(diag_connection({a}));
  CHECK(sup_distance(om.get(0, 0)->im, exterior_d(a)) < 1e-12);
  CHECK(sup_distance(om.get(1, 1)->im, -exterior_d(a)) < 1e-12);
  CHECK(om.get(0, 0)->re.sup_norm() < 1e-15);
  // h = 2 products are unresolved on n = 8.
  CHECK_THROWS_AS(curvature(sp1_connection(rf(g, 1, 2), rf(g, 2, 2), rf(g, 3, 2))), ResolutionError);
}

TEST_CASE("p1 matches the pointwise oracle") {
  const TorusGrid g(4, 8);
  for (int s = 0; s < 3; ++s) {
    const MatrixOneForm w = direct_sum(sp1_connection(rf(g, 10 * s), rf(g, 10 * s + 1), rf(g, 10 * s + 2)),
                                       sp1_connection(rf(g, 10 * s + 3), rf(g, 10 * s + 4), rf(g, 10 * s + 5)));
    const DiffForm p = pontryagin1(w);
    CHECK(sup_distance(p, p1_oracle(w)) < 1e-9 * std::max(1.0, p.sup_norm()));
    CHECK(pontryagin1_report(w).imaginary_residual < 1e-9 * pontryagin1_report(w).scale);
  }
  CHECK(pontryagin1(zero_connection(g, 2)).is_zero());
  CHECK_THROWS_AS(pontryagin1(zero_connection(TorusGrid(3, 8), 1)), DegreeError);
}

TEST_CASE("diagonal connection gives a sum of squares") {
  const TorusGrid g(4, 16);
  const DiffForm w = eval_trig_spec(witness_spec(), g);
  const DiffForm p = pontryagin1(diag_connection({w}));
  const DiffForm oracle = eval_trig_spec_direct(trig_wedge(trig_d(witness_spec()), trig_d(witness_spec())), g);
  CHECK(sup_distance(p, oracle) < 1e-9);
  const double c = 8.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < g.points(); i += 97)
    CHECK(p.component(0)[i] == doctest::Approx(c * std::cos(2 * std::numbers::pi * g.coord(i, 0)) *
                                               std::cos(2 * std::numbers::pi * g.coord(i, 2)))
                                   .epsilon(1e-10));

  std::vector<DiffForm> t;
  DiffForm squares(g, 4);
  for (int i = 0; i < 4; ++i) {
    t.push_back(rf(g, 40 + i, 2));
    wedge_accumulate(squares, exterior_d(t.back()), exterior_d(t.back()));
  }
  CHECK(sup_distance(pontryagin1(diag_connection(t)), squares) < 1e-9 * squares.sup_norm());
}

TEST_CASE("additivity and direct sum with zero") {
  const TorusGrid g(4, 8);
  const MatrixOneForm w1 = sp1_connection(rf(g, 1), rf(g, 2), rf(g, 3));
  const MatrixOneForm w2 = sp1_connection(rf(g, 4), rf(g, 5), rf(g, 6));
  const DiffForm sum = pontryagin1(direct_sum(w1, w2));
  CHECK(sup_distance(sum, pontryagin1(w1) + pontryagin1(w2)) < 1e-9 * std::max(1.0, sum.sup_norm()));
  CHECK(sup_distance(pontryagin1(direct_sum(w1, zero_connection(g, 2))), pontryagin1(w1)) < 1e-12);
}

TEST_CASE("transgression") {
  const TorusGrid g(4, 8);
  for (int s = 0; s < 3; ++s) {
    const MatrixOneForm w = sp1_connection(rf(g, 20 * s), rf(g, 20 * s + 1), rf(g, 20 * s + 2));
    const MatrixOneForm a = sp1_connection(rf(g, 20 * s + 3), rf(g, 20 * s + 4), rf(g, 20 * s + 5));
    const DiffForm rhs = pontryagin1(w + a) - pontryagin1(w);
    const DiffForm lhs = exterior_d(secondary_form(w, a));
    CHECK(sup_distance(lhs, rhs) < 1e-8 * std::max(1.0, rhs.sup_norm()));
    // A flipped normalization breaks the identity.
    CHECK(sup_distance(exterior_d(secondary_form(w, a, -kPontryaginC1)), rhs) > 1e-3 * rhs.sup_norm());
  }
  CHECK(secondary_form(zero_connection(g, 1), zero_connection(g, 1)).is_zero());
}

TEST_CASE("abelian secondary form is sum alpha ^ d alpha") {
  const TorusGrid g(4, 8);
  std::vector<DiffForm> al;
  DiffForm expect(g, 3);
  for (int j = 0; j < 3; ++j) {
    al.push_back(rf(g, 60 + j));
    wedge_accumulate(expect, al.back(), exterior_d(al.back()));
  }
  const DiffForm sec = secondary_form(zero_connection(g, 3), diag_connection(al));
  CHECK(sup_distance(sec, expect) < 1e-12 * std::max(1.0, expect.sup_norm()));
}

TEST_CASE("sp(1) formula report") {
  const TorusGrid g(4, 8);
  const DiffForm z(g, 1);
  const Sp1FormulaReport abelian = sp1_formula_check(rf(g, 1), z, z);
  CHECK(abelian.best_candidate == 1.0);
  CHECK(abelian.omega_wedge_omega_vanishes);
  CHECK(*std::min_element(abelian.discrepancies.begin(), abelian.discrepancies.end()) < 1e-10 * abelian.scale);
  const Sp1FormulaReport full = sp1_formula_check(rf(g, 1), rf(g, 2), rf(g, 3));
  CHECK_FALSE(full.omega_wedge_omega_vanishes);
  const Sp1FormulaReport zero = sp1_formula_check(z, z, z);
  CHECK(zero.omega_wedge_omega_sup == 0.0);
  CHECK_THROWS_AS(sp1_formula_check(DiffForm(TorusGrid(3, 8), 1), DiffForm(TorusGrid(3, 8), 1),
                                    DiffForm(TorusGrid(3, 8), 1)),
                  DegreeError);
}

}
