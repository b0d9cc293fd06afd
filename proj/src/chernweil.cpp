#include "chernforge/chernweil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chernforge/errors.hpp"

namespace chernforge {

void complex_wedge_accumulate(ComplexForm &out, const ComplexForm &a, const ComplexForm &b, double s_re,
                              double s_im) {
  // (ar + i ai)(br + i bi) = (ar br - ai bi) + i (ar bi + ai br)
  if (s_re != 0.0) {
    wedge_accumulate(out.re, a.re, b.re, s_re);
    wedge_accumulate(out.re, a.im, b.im, -s_re);
    wedge_accumulate(out.im, a.re, b.im, s_re);
    wedge_accumulate(out.im, a.im, b.re, s_re);
  }
  if (s_im != 0.0) {
    wedge_accumulate(out.im, a.re, b.re, s_im);
    wedge_accumulate(out.im, a.im, b.im, -s_im);
    wedge_accumulate(out.re, a.re, b.im, -s_im);
    wedge_accumulate(out.re, a.im, b.re, -s_im);
  }
}

// ---------------------------------------------------------------------------
// MatrixForm

MatrixForm::MatrixForm(TorusGrid grid, int rank, int degree) : grid_(grid), rank_(rank), degree_(degree) {
  if (rank < 1) throw ValidationError("matrix form rank must be >= 1");
  if (degree < 0 || degree > grid.dim()) throw DegreeError("matrix form degree outside [0, m]");
  entries_.resize(static_cast<std::size_t>(size()) * size());
}

const ComplexForm *MatrixForm::get(int i, int j) const {
  const auto &e = entries_[index(i, j)];
  return e ? &*e : nullptr;
}

ComplexForm &MatrixForm::at(int i, int j) {
  auto &e = entries_[index(i, j)];
  if (!e) e = ComplexForm::zero(grid_, degree_);
  return *e;
}

void MatrixForm::set(int i, int j, ComplexForm value) {
  if (!(value.re.grid() == grid_) || !(value.im.grid() == grid_)) throw GridMismatch("matrix entry on a different grid");
  if (value.re.degree() != degree_ || value.im.degree() != degree_) throw DegreeError("matrix entry degree mismatch");
  entries_[index(i, j)] = std::move(value);
}

std::size_t MatrixForm::stored_entries() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const auto &e) { return e.has_value(); }));
}

ComplexMatrix MatrixForm::sample(std::size_t comp, std::size_t point) const {
  ComplexMatrix m = ComplexMatrix::Zero(size(), size());
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (const auto *e = get(i, j)) m(i, j) = {e->re.component(comp)[point], e->im.component(comp)[point]};
    }
  }
  return m;
}

double MatrixForm::sup_norm() const {
  double s = 0.0;
  for (const auto &e : entries_)
    if (e) s = std::max(s, e->sup_norm());
  return s;
}

MatrixForm &MatrixForm::operator+=(const MatrixForm &other) {
  if (!(other.grid_ == grid_) || other.rank_ != rank_ || other.degree_ != degree_)
    throw ValidationError("matrix form shapes differ");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!other.entries_[i]) continue;
    if (!entries_[i]) {
      entries_[i] = other.entries_[i];
    } else {
      entries_[i]->re += other.entries_[i]->re;
      entries_[i]->im += other.entries_[i]->im;
    }
  }
  return *this;
}

MatrixForm &MatrixForm::operator*=(double s) {
  for (auto &e : entries_) {
    if (!e) continue;
    e->re *= s;
    e->im *= s;
  }
  return *this;
}

// ---------------------------------------------------------------------------
// Matrix calculus

namespace {
void require_compatible(const MatrixForm &a, const MatrixForm &b, const char *what) {
  if (!(a.grid() == b.grid())) throw GridMismatch(std::string(what) + ": grids differ");
  if (a.rank() != b.rank()) throw ValidationError(std::string(what) + ": ranks differ");
}

int entry_bandwidth(const ComplexForm &e) { return std::max(spectral_bandwidth(e.re), spectral_bandwidth(e.im)); }
} // namespace

MatrixForm matrix_d(const MatrixForm &a) {
  MatrixForm out(a.grid(), a.rank(), a.degree() + 1);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      if (const auto *e = a.get(i, j)) out.set(i, j, {exterior_d(e->re), exterior_d(e->im)});
  return out;
}

MatrixForm matrix_wedge(const MatrixForm &a, const MatrixForm &b) {
  require_compatible(a, b, "matrix_wedge");
  if (a.degree() + b.degree() > a.grid().dim()) throw DegreeError("matrix_wedge: degree overflow");
  MatrixForm out(a.grid(), a.rank(), a.degree() + b.degree());
  const int s = a.size();
  for (int i = 0; i < s; ++i) {
    for (int l = 0; l < s; ++l) {
      const auto *x = a.get(i, l);
      if (x == nullptr) continue;
      for (int j = 0; j < s; ++j) {
        const auto *y = b.get(l, j);
        if (y == nullptr) continue;
        complex_wedge_accumulate(out.at(i, j), *x, *y);
      }
    }
  }
  return out;
}

ComplexForm trace_wedge(const MatrixForm &a, const MatrixForm &b) {
  require_compatible(a, b, "trace_wedge");
  if (a.degree() + b.degree() > a.grid().dim()) throw DegreeError("trace_wedge: degree overflow");
  ComplexForm out = ComplexForm::zero(a.grid(), a.degree() + b.degree());
  for (int i = 0; i < a.size(); ++i) {
    for (int l = 0; l < a.size(); ++l) {
      const auto *x = a.get(i, l);
      const auto *y = b.get(l, i);
      if (x != nullptr && y != nullptr) complex_wedge_accumulate(out, *x, *y);
    }
  }
  return out;
}

MembershipReport connection_check(const MatrixForm &omega, double tol) {
  const int k = omega.rank();
  const int s = omega.size();
  const std::size_t np = omega.grid().points();
  MembershipReport r;
  // Pointwise max of |sum_t sign_t X_t| over terms given as (entry, sign, conj).
  struct Term {
    const ComplexForm *e;
    double sign;
    bool conj;
  };
  auto residual = [&](const std::vector<Term> &terms) {
    double worst = 0.0;
    std::size_t ncomp = 0;
    for (const auto &t : terms)
      if (t.e != nullptr) ncomp = t.e->re.num_components();
    for (std::size_t c = 0; c < ncomp; ++c) {
      for (std::size_t p = 0; p < np; ++p) {
        double re = 0.0, im = 0.0;
        for (const auto &t : terms) {
          if (t.e == nullptr) continue;
          re += t.sign * t.e->re.component(c)[p];
          im += t.sign * (t.conj ? -1.0 : 1.0) * t.e->im.component(c)[p];
        }
        worst = std::max(worst, std::hypot(re, im));
      }
    }
    return worst;
  };
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      // X* + X: X_ij + conj(X_ji)
      r.unitary_residual = std::max(r.unitary_residual, residual({{omega.get(i, j), 1.0, false}, {omega.get(j, i), 1.0, true}}));
    }
  }
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      // (X^t J)_ij + (J X)_ij
      const Term xtj = j >= k ? Term{omega.get(j - k, i), 1.0, false} : Term{omega.get(j + k, i), -1.0, false};
      const Term jx = i < k ? Term{omega.get(i + k, j), 1.0, false} : Term{omega.get(i - k, j), -1.0, false};
      r.symplectic_residual = std::max(r.symplectic_residual, residual({xtj, jx}));
    }
  }
  r.ok = r.unitary_residual < tol && r.symplectic_residual < tol;
  return r;
}

MatrixTwoForm curvature(const MatrixOneForm &omega) {
  if (omega.degree() != 1) throw DegreeError("curvature expects a matrix 1-form");
  const int s = omega.size();
  const int n = omega.grid().n();
  std::vector<int> band(static_cast<std::size_t>(s) * s, -1);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      if (const auto *e = omega.get(i, j)) band[static_cast<std::size_t>(i) * s + j] = entry_bandwidth(*e);
  for (int i = 0; i < s; ++i) {
    for (int l = 0; l < s; ++l) {
      const int b1 = band[static_cast<std::size_t>(i) * s + l];
      if (b1 < 0) continue;
      for (int j = 0; j < s; ++j) {
        const int b2 = band[static_cast<std::size_t>(l) * s + j];
        if (b2 < 0 || (i == l && l == j)) continue; // a ^ a = 0 for a scalar 1-form
        if (n <= 2 * (b1 + b2))
          throw ResolutionError("curvature: product of harmonics " + std::to_string(b1) + " and " +
                                std::to_string(b2) + " is not resolved by n=" + std::to_string(n));
      }
    }
  }
  MatrixTwoForm omega2 = matrix_d(omega);
  omega2 += matrix_wedge(omega, omega);
  return omega2;
}

PontryaginResult pontryagin1_report(const MatrixOneForm &omega) {
  if (omega.grid().dim() < 4) throw DegreeError("pontryagin1 needs m >= 4");
  const MatrixTwoForm big_omega = curvature(omega);
  ComplexForm tr = trace_wedge(big_omega, big_omega);
  PontryaginResult r;
  const double curv = big_omega.sup_norm();
  r.scale = std::max(1.0, curv * curv);
  r.imaginary_residual = std::abs(kPontryaginC1) * tr.im.sup_norm();
  r.form = kPontryaginC1 * std::move(tr.re);
  if (r.imaginary_residual >= 1e-9 * r.scale)
    throw InvalidInput("pontryagin1: imaginary part " + std::to_string(r.imaginary_residual) + " is not negligible");
  if (omega.grid().dim() > 4) {
    r.closed_residual = exterior_d(r.form).sup_norm();
    if (r.closed_residual >= 1e-8 * r.scale)
      throw InvalidInput("pontryagin1: result is not closed (" + std::to_string(r.closed_residual) + ")");
  }
  return r;
}

DiffForm pontryagin1(const MatrixOneForm &omega) { return pontryagin1_report(omega).form; }

// ---------------------------------------------------------------------------
// Constructions

MatrixOneForm zero_connection(const TorusGrid &grid, int rank) { return MatrixOneForm(grid, rank, 1); }

MatrixOneForm direct_sum(const MatrixOneForm &a, const MatrixOneForm &b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("direct_sum: grids differ");
  if (a.degree() != b.degree()) throw DegreeError("direct_sum: degrees differ");
  const int total = a.rank() + b.rank();
  MatrixOneForm out(a.grid(), total, a.degree());
  auto place = [&](const MatrixOneForm &src, int offset) {
    for (int i = 0; i < src.size(); ++i)
      for (int j = 0; j < src.size(); ++j)
        if (const auto *e = src.get(i, j))
          out.set(sp_embed_index(i, src.rank(), offset, total), sp_embed_index(j, src.rank(), offset, total), *e);
  };
  place(a, 0);
  place(b, a.rank());
  return out;
}

MatrixOneForm sp1_connection(const DiffForm &alpha, const DiffForm &beta, const DiffForm &gamma) {
  require_same_grid(alpha, beta, "sp1_connection");
  require_same_grid(alpha, gamma, "sp1_connection");
  if (alpha.degree() != 1 || beta.degree() != 1 || gamma.degree() != 1)
    throw DegreeError("sp1_connection expects 1-forms");
  MatrixOneForm w(alpha.grid(), 1, 1);
  if (!alpha.is_zero()) {
    w.set(0, 0, ComplexForm::imag(alpha));
    w.set(1, 1, ComplexForm::imag(-alpha));
  }
  if (!beta.is_zero() || !gamma.is_zero()) {
    w.set(0, 1, {beta, gamma});
    w.set(1, 0, {-beta, gamma});
  }
  return w;
}

MatrixOneForm diag_connection(const std::vector<DiffForm> &forms) {
  if (forms.empty()) throw ValidationError("diag_connection needs at least one form");
  const int q = static_cast<int>(forms.size());
  MatrixOneForm w(forms[0].grid(), q, 1);
  for (int i = 0; i < q; ++i) {
    require_same_grid(forms[0], forms[i], "diag_connection");
    if (forms[i].degree() != 1) throw DegreeError("diag_connection expects 1-forms");
    w.set(i, i, ComplexForm::imag(forms[i]));
    w.set(q + i, q + i, ComplexForm::imag(-forms[i]));
  }
  return w;
}

DiffForm secondary_form(const MatrixOneForm &omega, const MatrixOneForm &alpha, double c1) {
  require_compatible(omega, alpha, "secondary_form");
  if (omega.degree() != 1 || alpha.degree() != 1) throw DegreeError("secondary_form expects matrix 1-forms");
  // D(omega + t alpha) = Omega + t (d alpha + omega^alpha + alpha^omega) + t^2 alpha^alpha
  const MatrixTwoForm big_omega = curvature(omega);
  MatrixTwoForm linear = matrix_d(alpha);
  linear += matrix_wedge(omega, alpha);
  linear += matrix_wedge(alpha, omega);
  const MatrixTwoForm quadratic = matrix_wedge(alpha, alpha);

  ComplexForm acc = trace_wedge(alpha, big_omega);
  const ComplexForm t1 = trace_wedge(alpha, linear);
  const ComplexForm t2 = trace_wedge(alpha, quadratic);
  acc.re.add_scaled(0.5, t1.re).add_scaled(1.0 / 3.0, t2.re);
  return (2.0 * c1) * std::move(acc.re);
}

Sp1FormulaReport sp1_formula_check(const DiffForm &alpha, const DiffForm &beta, const DiffForm &gamma) {
  if (alpha.grid().dim() < 4) throw DegreeError("sp1_formula_check needs m >= 4");
  const MatrixOneForm w = sp1_connection(alpha, beta, gamma);
  const DiffForm p1 = pontryagin1(w);
  DiffForm squares(alpha.grid(), 4);
  for (const DiffForm *f : {&alpha, &beta, &gamma}) {
    const DiffForm df = exterior_d(*f);
    wedge_accumulate(squares, df, df);
  }
  Sp1FormulaReport r;
  r.scale = std::max(p1.sup_norm(), squares.sup_norm());
  r.candidates = {1.0, -1.0, 0.5, -0.5};
  double best = -1.0;
  for (double c : r.candidates) {
    const double d = sup_distance(p1, c * squares);
    r.discrepancies.push_back(d);
    if (best < 0.0 || d < best) {
      best = d;
      r.best_candidate = c;
    }
  }
  r.omega_wedge_omega_sup = matrix_wedge(w, w).sup_norm();
  r.omega_wedge_omega_vanishes = r.omega_wedge_omega_sup <= 1e-12 * std::max(1.0, w.sup_norm() * w.sup_norm());
  return r;
}

} // namespace chernforge
