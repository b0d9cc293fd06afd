#include <doctest.h>

#include "chernforge/chernweil.hpp"
#include "chernforge/decompose.hpp"
#include "chernforge/errors.hpp"
#include "oracles.hpp"

using namespace chernforge;

namespace {

std::vector<DiffForm> forms(const TorusGrid &g, int q, int h, std::uint64_t seed) {
  std::vector<DiffForm> out;
  for (int i = 0; i < q; ++i) out.push_back(random_form(g, 1, h, seed + static_cast<std::uint64_t>(i)).first);
  return out;
}

SolverOptions small_opts() {
  SolverOptions o;
  o.start_harmonic = 1;
  return o;
}

} // namespace

TEST_SUITE("decompose") {

TEST_CASE("apply_D") {
  const TorusGrid g(4, 8);
  CHECK(apply_D(OneFormTuple(g, std::vector<DiffForm>(3, DiffForm(g, 1)))).is_zero());
  const OneFormTuple t(g, forms(g, 4, 1, 10));
  const DiffForm s = apply_D(t);
  CHECK(is_exact(s).exact);
  DiffForm oracle(g, 4);
  for (const auto &w : t.forms) oracle += oracle::wedge(oracle::exterior_d(w), oracle::exterior_d(w));
  CHECK(sup_distance(s, oracle) < 1e-10 * std::max(1.0, s.sup_norm()));
}

TEST_CASE("apply_Dbar") {
  const TorusGrid g(4, 8);
  const GeneratedTuple n = generate_null_tuple(g, 10, 1, 1);
  CHECK(apply_Dbar(n.tuple, DiffForm(g, 2)).sup_norm() < 1e-10 * std::max(1.0, n.scale));
  const DiffForm phi = random_form(g, 2, 2, 5).first;
  const OneFormTuple zero(g, std::vector<DiffForm>(2, DiffForm(g, 1)));
  CHECK(sup_distance(apply_Dbar(zero, phi), exterior_d(phi)) < 1e-14);
}

TEST_CASE("linearizations against central differences") {
  const TorusGrid g(4, 8);
  for (int s = 0; s < 3; ++s) {
    const auto tf = forms(g, 3, 1, 100 * s);
    const auto af = forms(g, 3, 1, 100 * s + 50);
    const OneFormTuple t(g, tf), a(g, af);
    const double h = 1e-4;
    std::vector<DiffForm> plus = tf, minus = tf;
    for (int i = 0; i < 3; ++i) {
      plus[i].add_scaled(h, af[i]);
      minus[i].add_scaled(-h, af[i]);
    }
    DiffForm fd = apply_D(OneFormTuple(g, plus)) - apply_D(OneFormTuple(g, minus));
    fd *= 1.0 / (2 * h);
    const DiffForm lin = linearized_apply(t, a);
    CHECK(sup_distance(fd, lin) < 1e-6 * lin.sup_norm());

    const DiffForm zero2(g, 2);
    DiffForm fdb = apply_Dbar(OneFormTuple(g, plus), zero2) - apply_Dbar(OneFormTuple(g, minus), zero2);
    fdb *= 1.0 / (2 * h);
    const DiffForm linb = linearized_apply_dbar(t, a);
    CHECK(sup_distance(fdb, linb) < 1e-6 * linb.sup_norm());
  }
  const OneFormTuple t(g, forms(g, 2, 1, 7));
  CHECK(linearized_apply(t, OneFormTuple(g, std::vector<DiffForm>(2, DiffForm(g, 1)))).is_zero());
  CHECK(sup_distance(linearized_apply(t, t), 2.0 * apply_D(t)) < 1e-12 * apply_D(t).sup_norm());
}

TEST_CASE("options validation") {
  SolverOptions o;
  o.tolerance = 0.0;
  CHECK_THROWS_AS(o.validate(), ValidationError);
  o = {};
  o.homotopy_steps = 0;
  CHECK_THROWS_AS(o.validate(), ValidationError);
}

TEST_CASE("decompose preconditions") {
  const TorusGrid g(4, 8);
  FormKey vol{0, 1, 2, 3};
  const DiffForm c = DiffForm::monomial(g, vol, std::vector<double>(g.points(), 1.0));
  CHECK_THROWS_AS(decompose_exact_4form(c, 10, small_opts(), 1), NotExact);
  CHECK_THROWS_AS(decompose_exact_4form(DiffForm(g, 4), 5, small_opts(), 1), QTooSmall);
  CHECK_THROWS_AS(decompose_exact_4form(DiffForm(g, 3), 10, small_opts(), 1), DegreeError);

  const DecomposeResult z = decompose_exact_4form(DiffForm(g, 4), 10, small_opts(), 1);
  CHECK(z.report.converged);
  CHECK(z.report.residual_sup < 1e-10 * std::max(1.0, z.tuple.forms.front().sup_norm()));
  const GeneratedTuple start = generate_null_tuple(g, 10, 1, 1);
  for (std::size_t i = 0; i < 10; ++i) CHECK(z.tuple.forms[i] == start.tuple.forms[i]);
}

TEST_CASE("plant and recover on a coarse grid") {
  const TorusGrid g(4, 8);
  const OneFormTuple planted(g, forms(g, 10, 1, 300));
  const DiffForm sigma = apply_D(planted);
  const DecomposeResult r = decompose_exact_4form(sigma, 10, small_opts(), 2);
  CHECK(r.report.converged);
  CHECK(r.report.relative_residual < 1e-6);
  CHECK(r.report.homotopy_steps <= 10);
  DiffForm recomputed(g, 4);
  for (const auto &w : r.tuple.forms) recomputed += oracle::wedge(oracle::exterior_d(w), oracle::exterior_d(w));
  CHECK(sup_distance(recomputed, sigma) / sigma.sup_norm() < 1e-6);
  CHECK(std::abs(sup_distance(recomputed, sigma) / sigma.sup_norm() - r.report.relative_residual) < 1e-12);
}

TEST_CASE("budget exhaustion") {
  const TorusGrid g(4, 8);
  SolverOptions o = small_opts();
  o.time_limit_seconds = 1e-9;
  const DiffForm sigma = apply_D(OneFormTuple(g, forms(g, 10, 1, 300)));
  CHECK_THROWS_AS(decompose_exact_4form(sigma, 10, o, 2), BudgetExceeded);
}

TEST_CASE("stall reports the solver state") {
  const TorusGrid g(4, 8);
  SolverOptions o = small_opts();
  o.max_gn_iterations = 0;
  const DiffForm sigma = apply_D(OneFormTuple(g, forms(g, 10, 1, 300)));
  CHECK_THROWS_AS(decompose_exact_4form(sigma, 10, o, 2), ValidationError);
  // One Gauss-Newton iteration cannot reach 1e-13 from the homotopy start.
  o.max_gn_iterations = 1;
  o.tolerance = 1e-13;
  o.max_halvings = 1;
  try {
    decompose_exact_4form(sigma, 10, o, 2);
    FAIL("expected a stall");
  } catch (const SolveStalled &e) {
    CHECK_FALSE(e.report.converged);
    CHECK(e.report.halvings == 2);
    CHECK_FALSE(e.report.failure.empty());
  }
}

TEST_CASE("dbar") {
  const TorusGrid g(4, 8);
  // Exact beta: absorbed by phi alone.
  const DiffForm phi0 = random_form(g, 2, 2, 8).first;
  const DiffForm exact = exterior_d(phi0);
  const DbarResult e = solve_dbar(exact, 10, small_opts(), 3);
  CHECK(sup_distance(exterior_d(e.phi), exact) < 1e-9 * exact.sup_norm());
  CHECK(e.report.relative_residual < 1e-9);

  // Planted coexact content.
  const OneFormTuple t0(g, forms(g, 10, 1, 400));
  const DiffForm beta = apply_Dbar(t0, phi0);
  const DbarResult p = solve_dbar(beta, 10, small_opts(), 4);
  CHECK(p.report.converged);
  CHECK(sup_distance(apply_Dbar(p.tuple, p.phi), beta) < 1e-6 * beta.sup_norm());

  // The harmonic sector is only reachable through the tuple.
  const DiffForm h = DiffForm::monomial(g, {0, 1, 2}, std::vector<double>(g.points(), 1.0));
  const DbarResult r = solve_dbar(h, 10, small_opts(), 5);
  CHECK(r.report.converged);
  CHECK(sup_distance(apply_Dbar(r.tuple, r.phi), h) < 1e-6);
  CHECK(sup_distance(harmonic_part(null_sum(r.tuple)), h) < 1e-6);

  CHECK_THROWS_AS(solve_dbar(DiffForm(g, 2), 10, small_opts(), 1), DegreeError);
  CHECK_THROWS_AS(solve_dbar(h, 4, small_opts(), 1), QTooSmall);
}

TEST_CASE("realize") {
  const TorusGrid g(4, 8);
  const RealizeResult z = realize_pontryagin(DiffForm(g, 4), 10, small_opts(), 1);
  CHECK(pontryagin1(z.connection).sup_norm() < 1e-10);
  const DiffForm sigma = random_form(g, 4, 1, 77).first;
  const RealizeResult r = realize_pontryagin(sigma, 10, small_opts(), 2);
  CHECK(r.certified);
  CHECK(r.end_to_end_residual < 2e-6);
  CHECK(connection_check(r.connection).ok);
  CHECK(sup_distance(pontryagin1(r.connection), sigma) < 2e-6 * sigma.sup_norm());
}

}
