#pragma once

// Connections on trivial Sp(k)-bundles over T^m as sp(k)-valued forms, their
// curvature and first symplectic Pontrjagin form, and transgression.

#include <optional>
#include <vector>

#include "chernforge/quatlin.hpp"
#include "chernforge/torusforms.hpp"

namespace chernforge {

// p_1 = kPontryaginC1 * trace(Omega ^ Omega).
inline constexpr double kPontryaginC1 = -0.5;

struct ComplexForm {
  DiffForm re;
  DiffForm im;

  ComplexForm() = default;
  ComplexForm(DiffForm r, DiffForm i) : re(std::move(r)), im(std::move(i)) {}
  static ComplexForm zero(const TorusGrid &grid, int degree) { return {DiffForm(grid, degree), DiffForm(grid, degree)}; }
  static ComplexForm real(DiffForm r) {
    DiffForm i(r.grid(), r.degree());
    return {std::move(r), std::move(i)};
  }
  static ComplexForm imag(DiffForm i) {
    DiffForm r(i.grid(), i.degree());
    return {std::move(r), std::move(i)};
  }
  int degree() const { return re.degree(); }
  double sup_norm() const { return std::max(re.sup_norm(), im.sup_norm()); }
};

// out += s * (a ^ b) with complex s given as (s_re, s_im).
void complex_wedge_accumulate(ComplexForm &out, const ComplexForm &a, const ComplexForm &b, double s_re = 1.0,
                              double s_im = 0.0);

// 2k x 2k matrix of complex forms of a common degree. Entries are stored
// sparsely; an absent entry is zero.
class MatrixForm {
public:
  MatrixForm() = default;
  MatrixForm(TorusGrid grid, int rank, int degree);

  const TorusGrid &grid() const { return grid_; }
  int rank() const { return rank_; }
  int size() const { return 2 * rank_; }
  int degree() const { return degree_; }

  bool has(int i, int j) const { return entries_[index(i, j)].has_value(); }
  const ComplexForm *get(int i, int j) const;
  // Creates a zero entry on first access.
  ComplexForm &at(int i, int j);
  void set(int i, int j, ComplexForm value);
  std::size_t stored_entries() const;

  // Pointwise matrix of the component `comp` (form_basis order) at grid point `point`.
  ComplexMatrix sample(std::size_t comp, std::size_t point) const;
  double sup_norm() const;

  MatrixForm &operator+=(const MatrixForm &other);
  MatrixForm &operator*=(double s);
  friend MatrixForm operator+(MatrixForm a, const MatrixForm &b) { return a += b; }
  friend MatrixForm operator*(double s, MatrixForm a) { return a *= s; }

private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * size() + j; }

  TorusGrid grid_;
  int rank_ = 0;
  int degree_ = 0;
  std::vector<std::optional<ComplexForm>> entries_;
};

using MatrixOneForm = MatrixForm;
using MatrixTwoForm = MatrixForm;

// Entrywise exterior derivative.
MatrixForm matrix_d(const MatrixForm &a);
// (A ^ B)_{ij} = sum_l A_il ^ B_lj.
MatrixForm matrix_wedge(const MatrixForm &a, const MatrixForm &b);
// trace(A ^ B) without forming the product.
ComplexForm trace_wedge(const MatrixForm &a, const MatrixForm &b);

// Max over points and components of the sp(k) membership residuals, computed
// entrywise on the forms.
MembershipReport connection_check(const MatrixForm &omega, double tol = 1e-10);

// d omega + omega ^ omega. Throws ResolutionError when a genuine product of
// two distinct entries is not resolved by the grid.
MatrixTwoForm curvature(const MatrixOneForm &omega);

struct PontryaginResult {
  DiffForm form;
  double imaginary_residual = 0.0;
  double closed_residual = 0.0; // 0 on T^4 where every 4-form is top degree
  double scale = 1.0;
};

// c1 * trace(Omega ^ Omega). Throws InvalidInput when the imaginary part exceeds
// 1e-9 * scale or the result is not closed within 1e-8 * scale.
PontryaginResult pontryagin1_report(const MatrixOneForm &omega);
DiffForm pontryagin1(const MatrixOneForm &omega);

MatrixOneForm zero_connection(const TorusGrid &grid, int rank);
MatrixOneForm direct_sum(const MatrixOneForm &a, const MatrixOneForm &b);
// [[i alpha, beta + i gamma], [-beta + i gamma, -i alpha]].
MatrixOneForm sp1_connection(const DiffForm &alpha, const DiffForm &beta, const DiffForm &gamma);
// diag(i w_1, ..., i w_q, -i w_1, ..., -i w_q).
MatrixOneForm diag_connection(const std::vector<DiffForm> &forms);

// The 3-form whose d is p1(omega + alpha) - p1(omega), from integrating the
// t-polynomial trace(alpha ^ D(omega + t alpha)) with weights 1, 1/2, 1/3.
// `c1` overrides the normalization (used only by fault-injection tests).
DiffForm secondary_form(const MatrixOneForm &omega, const MatrixOneForm &alpha, double c1 = kPontryaginC1);

struct Sp1FormulaReport {
  std::vector<double> candidates;    // c in {1, -1, 1/2, -1/2}
  std::vector<double> discrepancies; // sup |p1 - c ((d alpha)^2 + (d beta)^2 + (d gamma)^2)|
  double best_candidate = 0.0;
  double omega_wedge_omega_sup = 0.0;
  bool omega_wedge_omega_vanishes = true;
  double scale = 0.0;
};

// Throws DegreeError when m < 4.
Sp1FormulaReport sp1_formula_check(const DiffForm &alpha, const DiffForm &beta, const DiffForm &gamma);

} // namespace chernforge
