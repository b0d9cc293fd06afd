#include "chernforge/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "chernforge/bounds.hpp"
#include "chernforge/chernweil.hpp"
#include "chernforge/decompose.hpp"
#include "chernforge/errors.hpp"
#include "chernforge/minorlemma.hpp"
#include "chernforge/quatlin.hpp"
#include "chernforge/regtuples.hpp"

namespace chernforge::cli {

namespace {

class Recorder {
public:
  explicit Recorder(SuiteResult &r) : r_(r) {}
  void below(const std::string &name, double value, double threshold) {
    r_.checks.push_back({name, value, threshold, value < threshold});
    r_.pass = r_.pass && r_.checks.back().pass;
  }
  void equal(const std::string &name, double value, double expected) {
    r_.checks.push_back({name, value, expected, value == expected});
    r_.pass = r_.pass && r_.checks.back().pass;
  }

private:
  SuiteResult &r_;
};

Quaternion random_quat(std::mt19937_64 &rng) {
  std::normal_distribution<double> nd;
  return {nd(rng), nd(rng), nd(rng), nd(rng)};
}

void quatlin_suite(Recorder &rec, const VerifyOptions &o) {
  double trace = 0.0, odd = 0.0, f1 = 0.0;
  for (int s = 0; s < 30; ++s) {
    const int k = 1 + s % 3;
    const auto e = random_sp_algebra(k, o.seed * 1000 + s);
    trace = std::max(trace, std::abs(e.x.trace()));
    const CharPoly cp = char_poly(e.x);
    odd = std::max(odd, cp.odd_residual / cp.scale);
    const double closed = f1_closed_form(e.x);
    f1 = std::max(f1, std::abs(closed - cp.f[0]) / std::max(1.0, std::abs(cp.f[0])));
  }
  rec.below("sp_trace", trace, 1e-12);
  rec.below("odd_coefficients_relative", odd, 1e-9);
  rec.below("f1_closed_form_relative", f1, 1e-9);

  std::mt19937_64 rng(o.seed + 17);
  double hom = 0.0, inner = 0.0;
  for (int s = 0; s < 10; ++s) {
    QuatMatrix a(3, 3), b(3, 3);
    for (auto &q : a.entries) q = random_quat(rng);
    for (auto &q : b.entries) q = random_quat(rng);
    hom = std::max(hom, (quat_to_complex(quat_matmul(a, b)) - quat_to_complex(a) * quat_to_complex(b)).cwiseAbs().maxCoeff());
    QuatVector v(3), w(3);
    for (auto &q : v) q = random_quat(rng);
    for (auto &q : w) q = random_quat(rng);
    const auto cv = quat_to_complex_vector(v);
    const auto cw = quat_to_complex_vector(w);
    inner = std::max(inner, std::abs(hn_inner(v, w).complex_part() - cw.dot(cv)));
  }
  rec.below("complex_model_homomorphism", hom, 1e-12);
  rec.below("inner_product_hermitian_part", inner, 1e-12);
  const double add = std::abs(f1_closed_form(sp_direct_sum(random_sp_algebra(1, 1).x, random_sp_algebra(2, 2).x)) -
                              f1_closed_form(random_sp_algebra(1, 1).x) - f1_closed_form(random_sp_algebra(2, 2).x));
  rec.below("f1_additivity", add, 1e-9);
}

void torusforms_suite(Recorder &rec, const VerifyOptions &o) {
  const TorusGrid g(3, o.n);
  double dd = 0.0, leib = 0.0, stokes = 0.0, prim = 0.0;
  for (int s = 0; s < 5; ++s) {
    const std::uint64_t base = o.seed * 100 + static_cast<std::uint64_t>(s) * 7;
    const DiffForm a = random_form(g, 1, 2, base).first;
    const DiffForm b = random_form(g, 1, 2, base + 1).first;
    dd = std::max(dd, exterior_d(exterior_d(a)).sup_norm() / std::max(1.0, a.sup_norm()));
    const DiffForm lhs = exterior_d(wedge(a, b));
    const DiffForm rhs = wedge(exterior_d(a), b) - wedge(a, exterior_d(b));
    leib = std::max(leib, sup_distance(lhs, rhs) / std::max(1.0, lhs.sup_norm()));
    stokes = std::max(stokes, std::abs(integrate(exterior_d(random_form(g, 2, 2, base + 2).first))));
    const DiffForm sigma = exterior_d(random_form(g, 2, 2, base + 3).first);
    const DiffForm beta = hodge_primitive(sigma, 1e-9 * std::max(1.0, sigma.sup_norm()));
    prim = std::max(prim, sup_distance(exterior_d(beta), sigma) / std::max(1.0, sigma.sup_norm()));
  }
  rec.below("d_squared", dd, 1e-10);
  rec.below("graded_leibniz", leib, 1e-8);
  rec.below("stokes", stokes, 1e-10);
  rec.below("primitive_round_trip", prim, 1e-8);
}

void chernweil_suite(Recorder &rec, const VerifyOptions &o) {
  const TorusGrid g(4, o.n);
  const double c1 = o.broken_normalization ? -kPontryaginC1 : kPontryaginC1;
  double additivity = 0.0, transgression = 0.0;
  for (int s = 0; s < 2; ++s) {
    const std::uint64_t b = o.seed * 100 + static_cast<std::uint64_t>(s) * 10;
    auto rf = [&](std::uint64_t k) { return random_form(g, 1, 1, b + k).first; };
    const MatrixOneForm w1 = sp1_connection(rf(0), rf(1), rf(2));
    const MatrixOneForm w2 = sp1_connection(rf(3), rf(4), rf(5));
    const DiffForm p_sum = pontryagin1(direct_sum(w1, w2));
    const DiffForm p_parts = pontryagin1(w1) + pontryagin1(w2);
    additivity = std::max(additivity, sup_distance(p_sum, p_parts) / std::max(1.0, p_sum.sup_norm()));
    const MatrixOneForm alpha = sp1_connection(rf(6), rf(7), rf(8));
    const DiffForm lhs = exterior_d(secondary_form(w1, alpha, c1));
    const DiffForm rhs = pontryagin1(w1 + alpha) - pontryagin1(w1);
    transgression = std::max(transgression, sup_distance(lhs, rhs) / std::max(1.0, rhs.sup_norm()));
  }
  rec.below("additivity", additivity, 1e-9);
  rec.below("transgression", transgression, 1e-8);
}

void regtuples_suite(Recorder &rec, const VerifyOptions &o) {
  const TorusGrid g(3, o.n);
  const GeneratedTuple t = generate_null_tuple(g, q_min(3), 2, o.seed);
  rec.below("null_sum_relative", t.null_residual / std::max(1.0, t.scale), 1e-10);
  rec.equal("certificate_min_rank", t.certificate.min_rank, t.certificate.target_rank);
  const auto surj = surjectivity_check_L(t.tuple);
  rec.equal("surjectivity_min_rank", surj.min_rank, surj.target_rank);
}

void decompose_suite(Recorder &rec, const VerifyOptions &o) {
  const TorusGrid g(4, 8);
  double worst = 0.0;
  for (int s = 0; s < 3; ++s) {
    const std::uint64_t b = o.seed * 100 + static_cast<std::uint64_t>(s) * 20;
    std::vector<DiffForm> tf, af;
    for (int i = 0; i < 3; ++i) {
      tf.push_back(random_form(g, 1, 1, b + i).first);
      af.push_back(random_form(g, 1, 1, b + 10 + i).first);
    }
    const OneFormTuple t(g, tf), a(g, af);
    const double h = 1e-4;
    std::vector<DiffForm> plus = tf, minus = tf;
    for (int i = 0; i < 3; ++i) {
      plus[i].add_scaled(h, af[i]);
      minus[i].add_scaled(-h, af[i]);
    }
    DiffForm fd = apply_D(OneFormTuple(g, plus)) - apply_D(OneFormTuple(g, minus));
    fd *= 1.0 / (2.0 * h);
    const DiffForm lin = linearized_apply(t, a);
    worst = std::max(worst, sup_distance(fd, lin) / std::max(1e-300, lin.sup_norm()));
  }
  rec.below("jacobian_vs_central_differences", worst, 1e-6);
}

void minorlemma_suite(Recorder &rec, const VerifyOptions &o) {
  const LemmaReport r = lemma_suite(3, 4, 2, o.seed);
  rec.equal("n3_q4_all_irreducible", r.all_irreducible && r.all_multilinear && r.all_nonzero ? 1.0 : 0.0, 1.0);
  rec.below("n3_q4_error_bound", r.error_bound, 1e-12);
  const FpPoly witness = (FpPoly::variable(0) * FpPoly::variable(1) + FpPoly::variable(2) * FpPoly::variable(3)) *
                         (FpPoly::variable(4) * FpPoly::variable(5) + FpPoly::variable(6) * FpPoly::variable(7));
  const FactorReport f = factor_components(witness, 2, o.seed);
  rec.equal("reducible_witness_components", static_cast<double>(f.components.size()), 2.0);
  rec.equal("codim_m3_q6_full_rank_fraction", codim_monte_carlo(3, 6, 200, o.seed).fraction, 1.0);
}

void bounds_suite(Recorder &rec, const VerifyOptions &) {
  const BoundsReport b = compute_bounds(4);
  rec.equal("m4_m0", static_cast<double>(b.m0), 0.0);
  rec.equal("m4_q_min", static_cast<double>(b.q_min), 10.0);
  rec.equal("m4_schlafly_k1", static_cast<double>(b.schlafly_n), 125.0);
  rec.equal("m8_k2_schlafly", static_cast<double>(compute_bounds(8, 2).schlafly_n), 2898.0);
}

} // namespace

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {"quatlin", "torusforms", "chernweil", "regtuples",
                                                 "decompose", "minorlemma", "bounds"};
  return names;
}

SuiteResult run_suite(const std::string &name, const VerifyOptions &opts) {
  SuiteResult r;
  r.name = name;
  Recorder rec(r);
  const auto start = std::chrono::steady_clock::now();
  if (name == "quatlin") quatlin_suite(rec, opts);
  else if (name == "torusforms") torusforms_suite(rec, opts);
  else if (name == "chernweil") chernweil_suite(rec, opts);
  else if (name == "regtuples") regtuples_suite(rec, opts);
  else if (name == "decompose") decompose_suite(rec, opts);
  else if (name == "minorlemma") minorlemma_suite(rec, opts);
  else if (name == "bounds") bounds_suite(rec, opts);
  else throw ValidationError("unknown suite \"" + name + "\"");
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Json to_json(const SuiteResult &r) {
  Json checks = Json::array();
  for (const auto &c : r.checks) checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  return {{"suite", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"checks", checks}};
}

} // namespace chernforge::cli
