#include "chernforge/decompose.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "chernforge/spectral.hpp"

namespace chernforge {

void SolverOptions::validate() const {
  if (homotopy_steps < 1) throw ValidationError("homotopy_steps must be >= 1");
  if (max_gn_iterations < 1) throw ValidationError("max_gn_iterations must be >= 1");
  if (max_cg_iterations < 1) throw ValidationError("max_cg_iterations must be >= 1");
  if (!(tikhonov > 0.0)) throw ValidationError("tikhonov weight must be positive");
  if (!(tolerance > 1e-14)) throw ValidationError("tolerance must exceed 1e-14");
  if (!(intermediate_tolerance > 0.0)) throw ValidationError("intermediate_tolerance must be positive");
  if (!(forcing > 0.0 && forcing < 1.0)) throw ValidationError("forcing must lie in (0, 1)");
  if (max_halvings < 0 || max_backtracks < 0) throw ValidationError("halving counts must be nonnegative");
  if (start_harmonic < 1) throw ValidationError("start_harmonic must be >= 1");
  if (time_limit_seconds < 0.0) throw ValidationError("time_limit_seconds must be nonnegative");
  if (start.max_retries < 1) throw ValidationError("start.max_retries must be >= 1");
}

// ---------------------------------------------------------------------------
// Operators

DiffForm apply_D(const OneFormTuple &t) {
  t.validate();
  if (t.grid.dim() < 4) throw DegreeError("apply_D needs m >= 4");
  DiffForm out(t.grid, 4);
  for (const auto &w : t.forms) {
    const DiffForm dw = exterior_d(w);
    wedge_accumulate(out, dw, dw);
  }
  return out;
}

DiffForm apply_Dbar(const OneFormTuple &t, const DiffForm &phi) {
  t.validate();
  if (t.grid.dim() < 3) throw DegreeError("apply_Dbar needs m >= 3");
  if (!(phi.grid() == t.grid)) throw GridMismatch("apply_Dbar: phi lives on a different grid");
  if (phi.degree() != 2) throw DegreeError("apply_Dbar: phi must be a 2-form");
  DiffForm out = exterior_d(phi);
  for (const auto &w : t.forms) wedge_accumulate(out, w, exterior_d(w));
  return out;
}

namespace {
void require_same_shape(const OneFormTuple &t, const OneFormTuple &a) {
  t.validate();
  a.validate();
  if (!(t.grid == a.grid)) throw GridMismatch("tuple increment lives on a different grid");
  if (t.size() != a.size()) throw ValidationError("tuple increment has a different length");
}
} // namespace

DiffForm linearized_apply(const OneFormTuple &t, const OneFormTuple &a) {
  require_same_shape(t, a);
  if (t.grid.dim() < 4) throw DegreeError("linearized_apply needs m >= 4");
  DiffForm out(t.grid, 4);
  for (std::size_t i = 0; i < t.size(); ++i) wedge_accumulate(out, exterior_d(a.forms[i]), exterior_d(t.forms[i]), 2.0);
  return out;
}

DiffForm linearized_apply_dbar(const OneFormTuple &t, const OneFormTuple &a) {
  require_same_shape(t, a);
  if (t.grid.dim() < 3) throw DegreeError("linearized_apply_dbar needs m >= 3");
  DiffForm out(t.grid, 3);
  for (std::size_t i = 0; i < t.size(); ++i) {
    wedge_accumulate(out, a.forms[i], exterior_d(t.forms[i]));
    wedge_accumulate(out, t.forms[i], exterior_d(a.forms[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gauss-Newton engine

namespace {

using Clock = std::chrono::steady_clock;

// A map F(t) of tuples, homogeneous of degree 2, together with the pieces of
// its Jacobian L the dual normal equations need.
class Problem {
public:
  virtual ~Problem() = default;
  virtual DiffForm value(const std::vector<DiffForm> &t) const = 0;
  virtual void linearize(const std::vector<DiffForm> &t) = 0;
  // (L L^t + mu) y
  virtual DiffForm normal_apply(const DiffForm &y, double mu) const = 0;
  // L^t y, one entry per tuple form
  virtual std::vector<DiffForm> adjoint(const DiffForm &y) const = 0;
  virtual DiffForm precondition(const DiffForm &y) const = 0;
};

class SquaresProblem final : public Problem {
public:
  DiffForm value(const std::vector<DiffForm> &t) const override {
    DiffForm out(t.front().grid(), 4);
    for (const auto &w : t) {
      const DiffForm dw = exterior_d(w);
      wedge_accumulate(out, dw, dw);
    }
    return out;
  }

  void linearize(const std::vector<DiffForm> &t) override {
    dw_.clear();
    for (const auto &w : t) dw_.push_back(exterior_d(w));
  }

  // L a = 2 sum d a_i ^ W_i, so L L^t y = 2 sum d delta (2 W_i-adjoint of y) ^ W_i.
  DiffForm normal_apply(const DiffForm &y, double mu) const override {
    DiffForm out(y.grid(), y.degree());
    for (const auto &wi : dw_) {
      DiffForm g = wedge_adjoint(y, wi);
      g *= 2.0;
      wedge_accumulate(out, d_codifferential(g), wi, 2.0);
    }
    out.add_scaled(mu, y);
    return out;
  }

  std::vector<DiffForm> adjoint(const DiffForm &y) const override {
    std::vector<DiffForm> out;
    for (const auto &wi : dw_) {
      DiffForm g = wedge_adjoint(y, wi);
      g *= 2.0;
      out.push_back(codifferential(g));
    }
    return out;
  }

  // L L^t behaves like a second-order operator; invert its constant-coefficient
  // part mode by mode, clamping the lowest shell.
  DiffForm precondition(const DiffForm &y) const override {
    auto &ctx = spectral_context(y.grid());
    const auto lap = ctx.laplacian();
    const double floor = 4.0 * std::numbers::pi * std::numbers::pi;
    auto spec = to_spectrum(y);
    DiffForm out(y.grid(), y.degree());
    for (std::size_t c = 0; c < spec.size(); ++c) {
      spec[c][0] = 0.0;
      for (std::size_t j = 1; j < spec[c].size(); ++j) spec[c][j] /= std::max(lap[j], floor);
      ctx.inverse(spec[c], out.component(c));
    }
    return out;
  }

private:
  std::vector<DiffForm> dw_;
};

DiffForm coexact_and_harmonic(const DiffForm &a) { return a - exact_projection(a); }

// F(t) = P(sum w_i ^ d w_i) with P the projection killing exact forms.
class NullSumProblem final : public Problem {
public:
  DiffForm value(const std::vector<DiffForm> &t) const override {
    DiffForm out(t.front().grid(), 3);
    for (const auto &w : t) wedge_accumulate(out, w, exterior_d(w));
    return coexact_and_harmonic(out);
  }

  // The derivative keeps the w ^ da term. In the continuum it equals a ^ W
  // modulo exact forms, but the grid product rule fails above the resolved
  // band and dropping it gives a wrong Jacobian.
  void linearize(const std::vector<DiffForm> &t) override {
    w_ = t;
    dw_.clear();
    for (const auto &w : t) dw_.push_back(exterior_d(w));
  }

  DiffForm normal_apply(const DiffForm &y, double mu) const override {
    const std::vector<DiffForm> a = adjoint(y);
    DiffForm acc(y.grid(), y.degree());
    for (std::size_t i = 0; i < a.size(); ++i) {
      wedge_accumulate(acc, a[i], dw_[i]);
      wedge_accumulate(acc, w_[i], exterior_d(a[i]));
    }
    DiffForm out = coexact_and_harmonic(acc);
    out.add_scaled(mu, y);
    return out;
  }

  std::vector<DiffForm> adjoint(const DiffForm &y) const override {
    const DiffForm py = coexact_and_harmonic(y);
    std::vector<DiffForm> out;
    for (std::size_t i = 0; i < dw_.size(); ++i) {
      DiffForm g = wedge_adjoint(py, dw_[i]);
      g += codifferential(wedge_adjoint(py, w_[i]));
      out.push_back(std::move(g));
    }
    return out;
  }

  DiffForm precondition(const DiffForm &y) const override { return y; }

private:
  std::vector<DiffForm> w_;
  std::vector<DiffForm> dw_;
};

class Engine {
public:
  Engine(const SolverOptions &opts, Problem &problem, const DiffForm &target, SolveReport &report)
      : opts_(opts), problem_(problem), target_(target), report_(report), start_(Clock::now()) {
    scale_ = target.sup_norm() > 0.0 ? target.sup_norm() : 1.0;
  }

  // Marches the target fraction from 0 to 1; throws SolveStalled on failure.
  void run(std::vector<DiffForm> &t) {
    double s = 0.0;
    double ds = 1.0 / opts_.homotopy_steps;
    int step = 0;
    while (s < 1.0) {
      const double s_next = std::min(1.0, s + ds);
      const bool last = s_next >= 1.0 - 1e-15;
      const std::vector<DiffForm> saved = t;
      // F is homogeneous of degree 2: rescaling a solution for fraction s
      // solves the fraction s_next exactly.
      if (s > 0.0) {
        const double c = std::sqrt(s_next / s);
        for (auto &w : t) w *= c;
      }
      ++step;
      const double tol = last ? opts_.tolerance : std::max(opts_.tolerance, opts_.intermediate_tolerance);
      double reached = 0.0;
      if (gauss_newton(t, last ? 1.0 : s_next, tol, step, reached)) {
        s = last ? 1.0 : s_next;
        report_.step_residuals.push_back(reached);
        ++report_.homotopy_steps;
        continue;
      }
      t = saved;
      ++report_.halvings;
      ds *= 0.5;
      if (report_.halvings > opts_.max_halvings) {
        report_.failure = "homotopy increment halved " + std::to_string(opts_.max_halvings) +
                          " times without progress at fraction " + std::to_string(s);
        throw SolveStalled("solver stalled: " + report_.failure, report_);
      }
    }
    report_.converged = true;
  }

private:
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  void check_budget() const {
    if (opts_.time_limit_seconds > 0.0 && elapsed() > opts_.time_limit_seconds)
      throw BudgetExceeded("solver exceeded the wall-clock budget of " + std::to_string(opts_.time_limit_seconds) + " s");
  }

  DiffForm residual(const std::vector<DiffForm> &t, double s) const {
    DiffForm r = problem_.value(t);
    r.add_scaled(-s, target_);
    return r;
  }

  bool gauss_newton(std::vector<DiffForm> &t, double s, double tol, int step, double &reached) {
    DiffForm r = residual(t, s);
    for (int it = 0;; ++it) {
      const double res = r.sup_norm() / scale_;
      report_.history.push_back({step, s, it, res, 0, elapsed()});
      if (res < tol) {
        reached = res;
        return true;
      }
      if (it >= opts_.max_gn_iterations) return false;
      check_budget();

      problem_.linearize(t);
      int cg = 0;
      const DiffForm y = solve_normal(r, std::min(opts_.forcing, 0.1 * res), cg);
      report_.cg_iterations += cg;
      report_.history.back().cg_iterations = cg;
      ++report_.gn_iterations;
      const std::vector<DiffForm> delta = problem_.adjoint(y);

      const double before = r.mean_square();
      double lambda = 1.0;
      bool accepted = false;
      for (int b = 0; b <= opts_.max_backtracks && !accepted; ++b, lambda *= 0.5) {
        std::vector<DiffForm> trial = t;
        for (std::size_t i = 0; i < t.size(); ++i) trial[i].add_scaled(lambda, delta[i]);
        DiffForm rt = residual(trial, s);
        if (rt.mean_square() < before) {
          t = std::move(trial);
          r = std::move(rt);
          accepted = true;
        }
      }
      if (!accepted) return false;
    }
  }

  // Preconditioned CG on (L L^t + mu) y = -r.
  DiffForm solve_normal(const DiffForm &r, double eta, int &iterations) {
    DiffForm y(r.grid(), r.degree());
    DiffForm rr = -r;
    DiffForm z = problem_.precondition(rr);
    DiffForm p = z;
    double rz = dot(rr, z);
    const double r0 = std::sqrt(dot(rr, rr));
    iterations = 0;
    if (r0 == 0.0) return y;
    for (int k = 0; k < opts_.max_cg_iterations; ++k) {
      check_budget();
      const DiffForm ap = problem_.normal_apply(p, opts_.tikhonov);
      const double pap = dot(p, ap);
      ++iterations;
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      y.add_scaled(alpha, p);
      rr.add_scaled(-alpha, ap);
      if (std::sqrt(dot(rr, rr)) < eta * r0) break;
      z = problem_.precondition(rr);
      const double rz_next = dot(rr, z);
      p *= rz_next / rz;
      p += z;
      rz = rz_next;
    }
    return y;
  }

  const SolverOptions &opts_;
  Problem &problem_;
  const DiffForm &target_;
  SolveReport &report_;
  Clock::time_point start_;
  double scale_ = 1.0;
};

void finish_report(SolveReport &report, const DiffForm &residual, const DiffForm &target, const OneFormTuple &t,
                   const SolverOptions &opts, Clock::time_point start) {
  report.target_sup = target.sup_norm();
  report.residual_sup = residual.sup_norm();
  report.residual_l2 = std::sqrt(residual.mean_square());
  report.relative_residual = report.target_sup > 0.0 ? report.residual_sup / report.target_sup : report.residual_sup;
  report.certificate = regularity_check(t, opts.start.regularity);
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
}

GeneratedTuple start_tuple(const TorusGrid &grid, int q, const SolverOptions &opts, std::uint64_t seed) {
  return generate_null_tuple(grid, q, opts.start_harmonic, seed, opts.start);
}

void check_q(int m, int q) {
  if (q < q_min(m))
    throw QTooSmall("q = " + std::to_string(q) + " is below q_min(" + std::to_string(m) + ") = " + std::to_string(q_min(m)));
}

} // namespace

// ---------------------------------------------------------------------------
// Solvers

DecomposeResult decompose_exact_4form(const DiffForm &sigma, int q, const SolverOptions &opts, std::uint64_t seed) {
  opts.validate();
  const auto start = Clock::now();
  const int m = sigma.grid().dim();
  if (m < 4) throw DegreeError("decompose_exact_4form needs m >= 4");
  if (sigma.degree() != 4) throw DegreeError("decompose_exact_4form expects a 4-form");
  check_q(m, q);
  const auto exact = is_exact(sigma);
  if (!exact.exact)
    throw NotExact("sigma is not exact (harmonic part " + std::to_string(exact.harmonic_norm) + ", sup|d sigma| " +
                   std::to_string(exact.closed_residual) + ")");

  GeneratedTuple gen = start_tuple(sigma.grid(), q, opts, seed);
  DecomposeResult out;
  out.report.start_attempts = gen.attempts;
  std::vector<DiffForm> t = std::move(gen.tuple.forms);
  if (sigma.is_zero()) {
    out.report.converged = true;
  } else {
    SquaresProblem problem;
    Engine(opts, problem, sigma, out.report).run(t);
  }
  out.tuple = OneFormTuple(sigma.grid(), std::move(t));
  finish_report(out.report, apply_D(out.tuple) - sigma, sigma, out.tuple, opts, start);
  return out;
}

DbarResult solve_dbar(const DiffForm &beta, int q, const SolverOptions &opts, std::uint64_t seed) {
  opts.validate();
  const auto start = Clock::now();
  const int m = beta.grid().dim();
  if (m < 3) throw DegreeError("solve_dbar needs m >= 3");
  if (beta.degree() != 3) throw DegreeError("solve_dbar expects a 3-form");
  check_q(m, q);

  GeneratedTuple gen = start_tuple(beta.grid(), q, opts, seed);
  DbarResult out;
  out.report.start_attempts = gen.attempts;
  std::vector<DiffForm> t = std::move(gen.tuple.forms);
  const DiffForm projected = coexact_and_harmonic(beta);
  // An exact beta is absorbed by d phi alone; the start tuple already fits.
  if (projected.sup_norm() > 1e-12 * std::max(1.0, beta.sup_norm())) {
    NullSumProblem problem;
    Engine(opts, problem, projected, out.report).run(t);
  } else {
    out.report.converged = true;
  }
  out.tuple = OneFormTuple(beta.grid(), std::move(t));
  DiffForm slack = beta - null_sum(out.tuple);
  const DiffForm exact_part = exact_projection(slack);
  out.phi = hodge_primitive(exact_part, 1e-9 * std::max(1.0, exact_part.sup_norm()));
  finish_report(out.report, apply_Dbar(out.tuple, out.phi) - beta, beta, out.tuple, opts, start);
  return out;
}

RealizeResult realize_pontryagin(const DiffForm &sigma, int q, const SolverOptions &opts, std::uint64_t seed) {
  DecomposeResult dec = decompose_exact_4form(sigma, q, opts, seed);
  RealizeResult out;
  out.connection = diag_connection(dec.tuple.forms);
  out.tuple = std::move(dec.tuple);
  out.report = std::move(dec.report);
  const DiffForm p1 = pontryagin1(out.connection);
  const double scale = sigma.sup_norm();
  const double diff = sup_distance(p1, sigma);
  out.end_to_end_residual = scale > 0.0 ? diff / scale : diff;
  out.certified = out.end_to_end_residual < 2.0 * opts.tolerance;
  return out;
}

} // namespace chernforge
