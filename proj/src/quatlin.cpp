#include "chernforge/quatlin.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chernforge/errors.hpp"

namespace chernforge {

using Complex = std::complex<double>;

Quaternion operator*(const Quaternion &a, const Quaternion &b) {
  return {a.u * b.u - a.x * b.x - a.y * b.y - a.z * b.z, a.u * b.x + a.x * b.u + a.y * b.z - a.z * b.y,
          a.u * b.y - a.x * b.z + a.y * b.u + a.z * b.x, a.u * b.z + a.x * b.y - a.y * b.x + a.z * b.u};
}

Quaternion quat_mul(const Quaternion &a, const Quaternion &b) { return a * b; }

double quat_distance(const Quaternion &a, const Quaternion &b) {
  const Quaternion d = a - b;
  return std::max({std::abs(d.u), std::abs(d.x), std::abs(d.y), std::abs(d.z)});
}

Quaternion hn_inner(const QuatVector &v, const QuatVector &w) {
  if (v.size() != w.size()) throw ValidationError("hn_inner: vector lengths differ");
  Quaternion s;
  for (std::size_t i = 0; i < v.size(); ++i) s = s + v[i] * w[i].conj();
  return s;
}

Eigen::VectorXcd quat_to_complex_vector(const QuatVector &v) {
  const auto k = static_cast<Eigen::Index>(v.size());
  Eigen::VectorXcd out(2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out(i) = v[i].complex_part();
    out(k + i) = v[i].j_part();
  }
  return out;
}

QuatMatrix quat_matmul(const QuatMatrix &a, const QuatMatrix &b) {
  if (a.cols != b.rows) throw ValidationError("quat_matmul: inner dimensions differ");
  QuatMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j)
      for (int l = 0; l < a.cols; ++l) c(i, j) = c(i, j) + a(i, l) * b(l, j);
  return c;
}

QuatMatrix quat_adjoint(const QuatMatrix &a) {
  QuatMatrix t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j).conj();
  return t;
}

ComplexMatrix quat_to_complex(const QuatMatrix &m) {
  ComplexMatrix out(2 * m.rows, 2 * m.cols);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      const Complex a = m(i, j).complex_part();
      const Complex b = m(i, j).j_part();
      out(i, j) = a;
      out(i, m.cols + j) = b;
      out(m.rows + i, j) = -std::conj(b);
      out(m.rows + i, m.cols + j) = std::conj(a);
    }
  }
  return out;
}

ComplexMatrix symplectic_j(int k) {
  ComplexMatrix j = ComplexMatrix::Zero(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    j(i, k + i) = 1.0;
    j(k + i, i) = -1.0;
  }
  return j;
}

namespace {
int half_rank(const ComplexMatrix &x, const char *what) {
  if (x.rows() != x.cols()) throw ValidationError(std::string(what) + ": matrix is not square");
  if (x.rows() % 2 != 0) throw ValidationError(std::string(what) + ": dimension is odd");
  return static_cast<int>(x.rows() / 2);
}

double max_abs(const ComplexMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
} // namespace

MembershipReport sp_algebra_check(const ComplexMatrix &x, double tol) {
  const int k = half_rank(x, "sp_algebra_check");
  const ComplexMatrix j = symplectic_j(k);
  MembershipReport r;
  r.unitary_residual = max_abs(x.adjoint() + x);
  r.symplectic_residual = max_abs(x.transpose() * j + j * x);
  r.ok = r.unitary_residual < tol && r.symplectic_residual < tol;
  return r;
}

MembershipReport sp_group_check(const ComplexMatrix &u, double tol) {
  const int k = half_rank(u, "sp_group_check");
  const ComplexMatrix j = symplectic_j(k);
  const ComplexMatrix id = ComplexMatrix::Identity(2 * k, 2 * k);
  MembershipReport r;
  r.unitary_residual = std::max(max_abs(u * u.adjoint() - id), max_abs(u.adjoint() * u - id));
  r.symplectic_residual = max_abs(u.transpose() * j * u - j);
  r.ok = r.unitary_residual < tol && r.symplectic_residual < tol;
  return r;
}

SpAlgebraElement sp_algebra_from_blocks(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ValidationError("sp_algebra_from_blocks: blocks must be square of equal size");
  const auto k = a.rows();
  SpAlgebraElement e;
  e.k = static_cast<int>(k);
  e.a = a;
  e.b = b;
  e.x.resize(2 * k, 2 * k);
  e.x.topLeftCorner(k, k) = a;
  e.x.topRightCorner(k, k) = b;
  e.x.bottomLeftCorner(k, k) = -b.conjugate();
  e.x.bottomRightCorner(k, k) = -a.transpose();
  return e;
}

SpAlgebraElement random_sp_algebra(int k, std::uint64_t seed) {
  if (k < 1) throw ValidationError("random_sp_algebra: rank must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix a = ComplexMatrix::Zero(k, k);
  ComplexMatrix b = ComplexMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    a(i, i) = Complex(0.0, normal(rng));
    for (int j = i + 1; j < k; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im);
      a(j, i) = Complex(-re, im);
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      b(i, j) = b(j, i) = Complex(re, im);
    }
  }
  return sp_algebra_from_blocks(a, b);
}

int sp_embed_index(int index, int k, int offset, int total) {
  return index < k ? offset + index : total + offset + (index - k);
}

ComplexMatrix sp_direct_sum(const ComplexMatrix &x, const ComplexMatrix &y) {
  const int k1 = half_rank(x, "sp_direct_sum");
  const int k2 = half_rank(y, "sp_direct_sum");
  const int total = k1 + k2;
  ComplexMatrix out = ComplexMatrix::Zero(2 * total, 2 * total);
  for (int i = 0; i < 2 * k1; ++i)
    for (int j = 0; j < 2 * k1; ++j) out(sp_embed_index(i, k1, 0, total), sp_embed_index(j, k1, 0, total)) = x(i, j);
  for (int i = 0; i < 2 * k2; ++i)
    for (int j = 0; j < 2 * k2; ++j) out(sp_embed_index(i, k2, k1, total), sp_embed_index(j, k2, k1, total)) = y(i, j);
  return out;
}

CharPoly char_poly(const ComplexMatrix &x, double member_tol) {
  const auto member = sp_algebra_check(x, member_tol);
  if (!member.ok)
    throw InvalidInput("char_poly: input is not in sp(k) (residuals " + std::to_string(member.unitary_residual) +
                       ", " + std::to_string(member.symplectic_residual) + ")");
  const int dim = static_cast<int>(x.rows());
  const ComplexMatrix h = Complex(0.0, 1.0) * x;
  // iX is Hermitian; symmetrize away roundoff before the eigensolve.
  const ComplexMatrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hs, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd mu = eig.eigenvalues();

  CharPoly cp;
  cp.coeffs.assign(dim + 1, 0.0);
  cp.coeffs[0] = 1.0;
  // prod (lambda + mu_j): elementary symmetric functions of mu.
  for (int j = 0; j < dim; ++j) {
    for (int r = j + 1; r >= 1; --r) cp.coeffs[r] += mu(j) * cp.coeffs[r - 1];
  }
  const double radius = dim == 0 ? 0.0 : mu.cwiseAbs().maxCoeff();
  cp.scale = std::pow(std::max(1.0, radius), dim);
  for (int r = 1; r <= dim; r += 2) cp.odd_residual = std::max(cp.odd_residual, std::abs(cp.coeffs[r]));
  if (cp.odd_residual >= 1e-9 * cp.scale)
    throw InvalidInput("char_poly: odd coefficients do not vanish (" + std::to_string(cp.odd_residual) + ")");
  for (int i = 1; 2 * i <= dim; ++i) cp.f.push_back((i % 2 == 0 ? 1.0 : -1.0) * cp.coeffs[2 * i]);
  return cp;
}

std::vector<double> char_poly_coeffs(const ComplexMatrix &x) { return char_poly(x).f; }

double f1_closed_form(const ComplexMatrix &x) {
  half_rank(x, "f1_closed_form");
  const ComplexMatrix a = Complex(0.0, 1.0) * x;
  const Complex tr = a.trace();
  const Complex tr2 = (a * a).trace();
  return 0.5 * (tr2 - tr * tr).real();
}

} // namespace chernforge
