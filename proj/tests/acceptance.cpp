// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances are pinned here and never relaxed at run time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "chernforge/bounds.hpp"
#include "chernforge/chernweil.hpp"
#include "chernforge/decompose.hpp"
#include "chernforge/minorlemma.hpp"
#include "chernforge/quatlin.hpp"
#include "chernforge/regtuples.hpp"
#include "oracles.hpp"

using namespace chernforge;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Sum of squares of d w_i recomputed with the test-side derivative and wedge.
DiffForm oracle_squares(const OneFormTuple &t) {
  DiffForm out(t.grid, 4);
  for (const auto &w : t.forms) {
    const DiffForm dw = oracle::exterior_d(w);
    out += oracle::wedge(dw, dw);
  }
  return out;
}

Outcome algebra() {
  const auto start = Clock::now();
  double trace = 0.0, odd = 0.0, f1 = 0.0;
  for (int s = 0; s < 100; ++s) {
    const int k = 1 + s % 3;
    const auto x = random_sp_algebra(k, 1000 + s).x;
    trace = std::max(trace, std::abs(x.trace()));
    const CharPoly cp = char_poly(x);
    odd = std::max(odd, cp.odd_residual / cp.scale);
    const auto det = oracle::leibniz_charpoly(x);
    const double expect = -det[2];
    f1 = std::max(f1, std::abs(f1_closed_form(x) - expect) / std::max(1.0, std::abs(expect)));
  }
  const double secs = seconds_since(start);
  return {trace < 1e-12 && odd < 1e-9 && f1 < 1e-9 && secs < 5.0,
          fmt("100 elements k=1..3: |trace| %.1e, odd/scale %.1e (<1e-9), f1 rel %.1e (<1e-9), %.2fs (<5s)", trace,
              odd, f1, secs)};
}

Outcome dec_suite() {
  const auto start = Clock::now();
  double dd = 0.0, leib = 0.0, stokes = 0.0, prim = 0.0;
  std::uint64_t seed = 1;
  for (int m : {3, 4}) {
    const TorusGrid g(m, 16);
    for (int p = 0; p <= m; ++p) {
      for (int s = 0; s < 50; ++s) {
        const DiffForm a = random_form(g, p, 2, seed++).first;
        if (p + 2 <= m) dd = std::max(dd, exterior_d(exterior_d(a)).sup_norm());
        if (p + 2 <= m) {
          const DiffForm b = random_form(g, 1, 2, seed++).first;
          const DiffForm lhs = exterior_d(wedge(a, b));
          DiffForm rhs = wedge(exterior_d(a), b);
          rhs.add_scaled(p % 2 == 0 ? 1.0 : -1.0, wedge(a, exterior_d(b)));
          leib = std::max(leib, sup_distance(lhs, rhs) / std::max(1.0, lhs.sup_norm()));
        }
        if (p == m - 1) stokes = std::max(stokes, std::abs(integrate(exterior_d(a))));
        if (p >= 1) {
          const DiffForm sigma = exterior_d(random_form(g, p - 1, 2, seed++).first);
          const DiffForm beta = hodge_primitive(sigma, 1e-9 * std::max(1.0, sigma.sup_norm()));
          prim = std::max(prim, sup_distance(exterior_d(beta), sigma) / std::max(1.0, sigma.sup_norm()));
        }
      }
    }
  }
  const double secs = seconds_since(start);
  return {dd < 1e-10 && leib < 1e-8 && stokes < 1e-10 && prim < 1e-8 && secs < 30.0,
          fmt("T3,T4 n=16, 50 forms/degree: d^2 %.1e (<1e-10), Leibniz %.1e (<1e-8), Stokes %.1e (<1e-10), "
              "primitive %.1e (<1e-8), %.1fs (<30s)",
              dd, leib, stokes, prim, secs)};
}

Outcome chern_weil() {
  const auto start = Clock::now();
  const TorusGrid g(4, 16);
  double add = 0.0, trans = 0.0, closed = 0.0;
  auto sp1 = [&](std::uint64_t b) {
    return sp1_connection(random_form(g, 1, 2, b).first, random_form(g, 1, 2, b + 1).first,
                          random_form(g, 1, 2, b + 2).first);
  };
  for (int s = 0; s < 20; ++s) {
    const std::uint64_t b = 5000 + 20 * static_cast<std::uint64_t>(s);
    const MatrixOneForm w1 = sp1(b), w2 = sp1(b + 3);
    const MatrixOneForm w = direct_sum(w1, w2);
    const MatrixOneForm alpha = direct_sum(sp1(b + 6), sp1(b + 9));
    const PontryaginResult pw = pontryagin1_report(w);
    const PontryaginResult pwa = pontryagin1_report(w + alpha);
    const DiffForm parts = pontryagin1(w1) + pontryagin1(w2);
    add = std::max(add, sup_distance(pw.form, parts) / std::max(1.0, pw.form.sup_norm()));
    const DiffForm rhs = pwa.form - pw.form;
    trans = std::max(trans, sup_distance(exterior_d(secondary_form(w, alpha)), rhs) / std::max(1.0, rhs.sup_norm()));
    closed = std::max({closed, pw.closed_residual / pw.scale, pwa.closed_residual / pwa.scale});
  }
  const double secs = seconds_since(start);
  return {add < 1e-9 && trans < 1e-8 && closed < 1e-8 && secs < 120.0,
          fmt("20 sp(1)+sp(1) cases T4 n=16: additivity %.1e (<1e-9), transgression %.1e (<1e-8), "
              "closedness %.1e (<1e-8), %.1fs (<120s)",
              add, trans, closed, secs)};
}

Outcome diagonal_identity() {
  const TorusGrid g(4, 16);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    std::vector<DiffForm> forms;
    TrigSpec expect;
    expect.m = 4;
    expect.degree = 4;
    for (int i = 0; i < 1 + s % 4; ++i) {
      const auto [w, spec] = random_form(g, 1, 2, 7000 + 10 * static_cast<std::uint64_t>(s) + i);
      forms.push_back(w);
      expect = trig_add(expect, trig_wedge(trig_d(spec), trig_d(spec)));
    }
    const DiffForm p = pontryagin1(diag_connection(forms));
    worst = std::max(worst, sup_distance(p, eval_trig_spec_direct(expect, g)) / std::max(1.0, p.sup_norm()));
  }
  // sin(2 pi x1) dx2 + sin(2 pi x3) dx4
  TrigSpec ws;
  ws.m = 4;
  ws.degree = 1;
  ws.terms.push_back({{1}, {Harmonic{{1, 0, 0, 0}, 0.0, 1.0}}});
  ws.terms.push_back({{3}, {Harmonic{{0, 0, 1, 0}, 0.0, 1.0}}});
  const DiffForm p = pontryagin1(diag_connection({eval_trig_spec(ws, g)}));
  const double c = 8.0 * std::numbers::pi * std::numbers::pi;
  double witness = 0.0, analytic = 0.0;
  witness = sup_distance(p, eval_trig_spec_direct(trig_wedge(trig_d(ws), trig_d(ws)), g));
  for (std::size_t i = 0; i < g.points(); ++i)
    analytic = std::max(analytic, std::abs(p.component(0)[i] - c * std::cos(2 * std::numbers::pi * g.coord(i, 0)) *
                                                                    std::cos(2 * std::numbers::pi * g.coord(i, 2))));
  return {worst < 1e-9 && witness < 1e-9 && analytic < 1e-9,
          fmt("10 tuples vs trig oracle %.1e, witness vs trig oracle %.1e, vs 8pi^2 cos cos %.1e (all <1e-9)", worst,
              witness, analytic)};
}

Outcome null_tuples() {
  std::string detail;
  bool pass = true;
  for (const auto &[m, q] : {std::pair{3, 6}, std::pair{4, 10}}) {
    const TorusGrid g(m, 16);
    int ok = 0, first_try = 0;
    double worst_null = 0.0, min_sigma = 1e300;
    for (int s = 0; s < 10; ++s) {
      try {
        const GeneratedTuple t = generate_null_tuple(g, q, 2, 100 + static_cast<std::uint64_t>(s));
        const double rel = null_sum(t.tuple).sup_norm() / std::max(1.0, t.scale);
        worst_null = std::max(worst_null, rel);
        min_sigma = std::min(min_sigma, t.certificate.min_sigma);
        const bool good = rel < 1e-10 && t.certificate.pass && t.certificate.min_rank == binomial(m, 2);
        ok += good;
        first_try += good && t.attempts == 1;
      } catch (const RegularityNotAchieved &) {
      }
    }
    pass = pass && ok >= 9;
    if (!detail.empty()) detail += "; ";
    detail += fmt("T%d q=%d: %d/10 certified (%d first try), null %.1e (<1e-10 scale), min sigma %.2e", m, q, ok,
                  first_try, worst_null, min_sigma);
  }
  return {pass, detail};
}

Outcome jacobian() {
  const TorusGrid g(4, 8);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int q = 1 + s % 5;
    std::vector<DiffForm> tf, af;
    for (int i = 0; i < q; ++i) {
      tf.push_back(random_form(g, 1, 1, 9000 + 50 * static_cast<std::uint64_t>(s) + i).first);
      af.push_back(random_form(g, 1, 1, 9025 + 50 * static_cast<std::uint64_t>(s) + i).first);
    }
    const double h = 1e-4;
    std::vector<DiffForm> plus = tf, minus = tf;
    for (int i = 0; i < q; ++i) {
      plus[i].add_scaled(h, af[i]);
      minus[i].add_scaled(-h, af[i]);
    }
    DiffForm fd = apply_D(OneFormTuple(g, plus)) - apply_D(OneFormTuple(g, minus));
    fd *= 1.0 / (2 * h);
    const DiffForm lin = linearized_apply(OneFormTuple(g, tf), OneFormTuple(g, af));
    worst = std::max(worst, sup_distance(fd, lin) / lin.sup_norm());
  }
  return {worst < 1e-6, fmt("20 cases, step 1e-4: worst relative error %.1e (<1e-6)", worst)};
}

Outcome decomposition() {
  const TorusGrid g(4, 16);
  int ok = 0;
  std::string per_seed;
  for (int s = 0; s < 5; ++s) {
    const std::uint64_t seed = 11 + static_cast<std::uint64_t>(s);
    TrigSpec spec;
    spec.m = 4;
    spec.degree = 4;
    for (int i = 0; i < 10; ++i) {
      const TrigSpec w = random_form(g, 1, 2, 100 * seed + i).second;
      spec = trig_add(spec, trig_wedge(trig_d(w), trig_d(w)));
    }
    const DiffForm sigma = eval_trig_spec(spec, g);
    const auto start = Clock::now();
    bool good = false;
    try {
      const DecomposeResult r = decompose_exact_4form(sigma, 10, SolverOptions{}, seed);
      const double secs = seconds_since(start);
      const double indep = sup_distance(oracle_squares(r.tuple), sigma) / sigma.sup_norm();
      const double agree = std::abs(indep - r.report.relative_residual);
      good = r.report.relative_residual < 1e-6 && r.report.homotopy_steps <= 10 && secs < 300.0 && agree < 1e-12;
      per_seed += fmt(" [seed %llu: res %.1e, steps %d, %.0fs, agree %.0e]", static_cast<unsigned long long>(seed),
                      r.report.relative_residual, r.report.homotopy_steps, secs, agree);
    } catch (const std::exception &e) {
      per_seed += fmt(" [seed %llu: %s]", static_cast<unsigned long long>(seed), e.what());
    }
    ok += good;
  }
  return {ok >= 4, fmt("T4 n=16 q=10 h=2: %d/5 seeds (need 4; res <1e-6, <=10 steps, <300s, agree <1e-12)", ok) +
                       per_seed};
}

Outcome realization() {
  const TorusGrid g(4, 16);
  const DiffForm sigma = random_form(g, 4, 2, 4242).first;
  const auto start = Clock::now();
  try {
    const RealizeResult r = realize_pontryagin(sigma, 10, SolverOptions{}, 7);
    const double secs = seconds_since(start);
    const double e2e = sup_distance(pontryagin1(r.connection), sigma) / sigma.sup_norm();
    const double indep = sup_distance(oracle_squares(r.tuple), sigma) / sigma.sup_norm();
    return {e2e < 2e-6 && r.certified,
            fmt("random h=2 sigma T4 n=16 q=10: end-to-end %.1e (<2e-6), oracle recomputation %.1e, GN %d, CG %d, "
                "%.0fs",
                e2e, indep, r.report.gn_iterations, r.report.cg_iterations, secs)};
  } catch (const std::exception &e) {
    return {false, std::string("solver failed: ") + e.what()};
  }
}

Outcome lemma() {
  const LemmaReport small = lemma_suite(3, 4, 2, 1);
  const auto start = Clock::now();
  const LemmaReport big = lemma_suite(4, 6, 2, 2, {0, 1, 2, 3, 4, 5});
  const double secs = seconds_since(start);
  auto v = [](int i) { return FpPoly::variable(i); };
  const FactorReport w = factor_components((v(0) * v(1) + v(2) * v(3)) * (v(4) * v(5) + v(6) * v(7)), 2, 3);
  const bool split = !w.irreducible && w.components == std::vector<std::vector<int>>{{0, 1, 2, 3}, {4, 5, 6, 7}};
  const bool small_ok = small.subsets.size() == 4 && small.all_multilinear && small.all_nonzero &&
                        small.all_irreducible && small.error_bound < 1e-12;
  const bool big_ok = big.subsets.size() == 1 && big.subsets[0].factors.verdict == "irreducible" &&
                      big.all_multilinear && big.all_nonzero && secs < 600.0;
  return {small_ok && big_ok && split,
          fmt("n=3 q=4: 4 subsets irreducible=%d, error bound %.1e (<1e-12); n=4 q=6: %s, %zu terms, %.1fs (<600s); "
              "witness splits=%d",
              small.all_irreducible, small.error_bound, big.subsets[0].factors.verdict.c_str(), big.subsets[0].terms,
              secs, split)};
}

Outcome codimension() {
  const CodimReport a = codim_monte_carlo(3, 6, 1000, 1);
  const CodimReport b = codim_monte_carlo(4, 10, 1000, 2);
  return {a.fraction == 1.0 && b.fraction == 1.0,
          fmt("m=3 q=6: %d/1000 full rank; m=4 q=10: %d/1000 full rank", a.full_rank, b.full_rank)};
}

Outcome bounds() {
  const BoundsReport b = compute_bounds(4, 1);
  // Hand evaluation: m0 = floor(5/4) - 1, q_min = 4*5/2, Schlafly = 1*5*(16 + 8 + 1).
  const long long m0 = 5 / 4 - 1, qmin = 4 * 5 / 2, schlafly = 1 * 5 * (4 * 4 * 1 + 2 * 4 * 1 + 1);
  return {b.m0 == m0 && b.q_min == qmin && b.schlafly_n == schlafly && m0 == 0 && qmin == 10 && schlafly == 125,
          fmt("m=4: m0=%lld, q_min=%lld, Schlafly(k=1)=%lld", b.m0, b.q_min, b.schlafly_n)};
}

} // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"algebra suite", algebra},
      {"exterior calculus suite", dec_suite},
      {"Chern-Weil suite", chern_weil},
      {"diagonal-connection identity", diagonal_identity},
      {"null regular tuples", null_tuples},
      {"Jacobian check", jacobian},
      {"sum-of-squares decomposition", decomposition},
      {"end-to-end realization", realization},
      {"minor lemma", lemma},
      {"codimension Monte Carlo", codimension},
      {"bounds calculator", bounds},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
