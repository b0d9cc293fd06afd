#pragma once

// Real-valued differential forms on the flat torus T^m = (R/Z)^m, sampled on a
// uniform periodic grid. Wedge products are pointwise; d and its adjoint are
// spectral (exact on band-limited data).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "chernforge/errors.hpp"
#include "chernforge/form_basis.hpp"
#include "chernforge/trigspec.hpp"

namespace chernforge {

inline constexpr std::size_t kDefaultPointBudget = std::size_t{1} << 22;

class TorusGrid {
public:
  TorusGrid() = default;
  // m in [2, 6], n >= 4; total points bounded by `point_budget`.
  TorusGrid(int m, int n, std::size_t point_budget = kDefaultPointBudget);

  int dim() const { return m_; }
  int n() const { return n_; }
  std::size_t points() const { return points_; }

  // Coordinate x_axis in [0, 1) of the flat point index (axis 0 varies slowest).
  double coord(std::size_t index, int axis) const;
  std::size_t stride(int axis) const;

  // Largest harmonic a product-free field may carry: n > 2h.
  bool resolves(int max_harmonic) const { return n_ > 2 * max_harmonic; }

  friend bool operator==(const TorusGrid &, const TorusGrid &) = default;

private:
  int m_ = 0;
  int n_ = 0;
  std::size_t points_ = 0;
};

class DiffForm {
public:
  DiffForm() = default;
  DiffForm(TorusGrid grid, int degree);

  // Constant-coefficient form; `coefficients` follows form_basis order.
  static DiffForm constant(const TorusGrid &grid, int degree, std::span<const double> coefficients);
  // Scalar field `values` times dx_key.
  static DiffForm monomial(const TorusGrid &grid, const FormKey &key, std::vector<double> values);

  const TorusGrid &grid() const { return grid_; }
  int degree() const { return degree_; }
  std::size_t num_components() const { return comps_.size(); }
  const std::vector<FormKey> &keys() const { return form_basis(grid_.dim(), degree_).keys; }

  std::span<const double> component(std::size_t i) const { return comps_[i]; }
  std::span<double> component(std::size_t i) { return comps_[i]; }
  std::span<const double> component(const FormKey &key) const;
  std::span<double> component(const FormKey &key);

  double sup_norm() const;
  // Sum over components and points of squared values, divided by the point count.
  double mean_square() const;
  bool is_zero() const;

  DiffForm &operator+=(const DiffForm &other);
  DiffForm &operator-=(const DiffForm &other);
  DiffForm &operator*=(double s);
  // this += s * other
  DiffForm &add_scaled(double s, const DiffForm &other);

  friend DiffForm operator+(DiffForm a, const DiffForm &b) { return a += b; }
  friend DiffForm operator-(DiffForm a, const DiffForm &b) { return a -= b; }
  friend DiffForm operator*(double s, DiffForm a) { return a *= s; }
  friend DiffForm operator-(DiffForm a) { return a *= -1.0; }

  // Euclidean inner product over all stored values.
  friend double dot(const DiffForm &a, const DiffForm &b);
  friend double sup_distance(const DiffForm &a, const DiffForm &b);
  friend bool operator==(const DiffForm &, const DiffForm &) = default;

private:
  TorusGrid grid_;
  int degree_ = 0;
  std::vector<std::vector<double>> comps_;
};

void require_same_grid(const DiffForm &a, const DiffForm &b, const char *what);

DiffForm wedge(const DiffForm &a, const DiffForm &b);
// out += scale * (a ^ b)
void wedge_accumulate(DiffForm &out, const DiffForm &a, const DiffForm &b, double scale = 1.0);
// Pointwise adjoint of eta -> eta ^ b: returns the degree(y)-degree(b) form g
// with <g, eta> = <y, eta ^ b> for every eta.
DiffForm wedge_adjoint(const DiffForm &y, const DiffForm &b);

DiffForm exterior_d(const DiffForm &a);
// L2 adjoint of exterior_d on the grid; lowers degree by one.
DiffForm codifferential(const DiffForm &a);

double integrate(const DiffForm &top_form);
DiffForm harmonic_part(const DiffForm &a);

struct ExactnessReport {
  bool exact = false;
  double closed_residual = 0.0; // sup |d a|
  double harmonic_norm = 0.0;   // sup |harmonic_part(a)|
  double tol = 0.0;
};

// Closed with vanishing constant part, both below the absolute tolerance `tol`.
ExactnessReport is_exact(const DiffForm &a, double tol);
// Same test with tol = 1e-9 * max(1, sup|a|).
ExactnessReport is_exact(const DiffForm &a);

// Minimal-norm (coexact) beta with d beta = sigma. Throws NotClosed or
// HarmonicObstruction when sigma is not exact at tolerance `tol`.
DiffForm hodge_primitive(const DiffForm &sigma, double tol);

// Spectral orthogonal projection onto the image of d (exact forms).
DiffForm exact_projection(const DiffForm &a);
// d(codifferential(a)) in one spectral pass.
DiffForm d_codifferential(const DiffForm &a);

// Largest |k_a| among Fourier modes whose magnitude exceeds rel_tol times the
// largest mode of the same component; -1 for the zero form.
int spectral_bandwidth(const DiffForm &a, double rel_tol = 1e-11);

// Samples every harmonic of `spec` on the grid (spectral synthesis, exact up to
// roundoff). Rejects specs the grid does not resolve (n <= 2h) or whose
// dimension differs from the grid's.
DiffForm eval_trig_spec(const TrigSpec &spec, const TorusGrid &grid);
// Pointwise evaluation of each harmonic; slow, used as an oracle.
DiffForm eval_trig_spec_direct(const TrigSpec &spec, const TorusGrid &grid);

// Zero-mean band-limited random form of harmonic degree <= h with seeded
// N(0,1)/sqrt(#modes) amplitudes; returns the sampled form and its exact spec.
std::pair<DiffForm, TrigSpec> random_form(const TorusGrid &grid, int degree, int h, std::uint64_t seed);

} // namespace chernforge
