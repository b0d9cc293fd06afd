#pragma once

// Quaternions and the complex 2k x 2k model of Sp(k) and its Lie algebra.
// A quaternion u + xi + yj + zk is written a + b j with a = u + xi, b = y + zi.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace chernforge {

using ComplexMatrix = Eigen::MatrixXcd;

struct Quaternion {
  double u = 0.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion real(double r) { return {r, 0.0, 0.0, 0.0}; }
  static Quaternion from_complex(std::complex<double> a, std::complex<double> b) {
    return {a.real(), a.imag(), b.real(), b.imag()};
  }
  std::complex<double> complex_part() const { return {u, x}; }
  std::complex<double> j_part() const { return {y, z}; }

  Quaternion conj() const { return {u, -x, -y, -z}; }
  double norm2() const { return u * u + x * x + y * y + z * z; }

  friend Quaternion operator+(const Quaternion &a, const Quaternion &b) {
    return {a.u + b.u, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion &a, const Quaternion &b) {
    return {a.u - b.u, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator*(const Quaternion &a, const Quaternion &b);
  friend bool operator==(const Quaternion &, const Quaternion &) = default;
};

Quaternion quat_mul(const Quaternion &a, const Quaternion &b);
double quat_distance(const Quaternion &a, const Quaternion &b);

using QuatVector = std::vector<Quaternion>;

// sum_i v_i conj(w_i). Throws ValidationError on length mismatch.
Quaternion hn_inner(const QuatVector &v, const QuatVector &w);

// Complex coordinates (a_1..a_k, b_1..b_k) of v = a + b j.
Eigen::VectorXcd quat_to_complex_vector(const QuatVector &v);

// Row-major k x k quaternion matrix.
struct QuatMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Quaternion> entries;

  QuatMatrix() = default;
  QuatMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<std::size_t>(r) * c) {}
  Quaternion &operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * cols + j]; }
  const Quaternion &operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
};

QuatMatrix quat_matmul(const QuatMatrix &a, const QuatMatrix &b);
QuatMatrix quat_adjoint(const QuatMatrix &a);
// M = A + B j  ->  [[A, B], [-conj(B), conj(A)]].
ComplexMatrix quat_to_complex(const QuatMatrix &m);

// J = [[0, I_k], [-I_k, 0]].
ComplexMatrix symplectic_j(int k);

struct MembershipReport {
  bool ok = false;
  double unitary_residual = 0.0;    // algebra: max|X* + X|; group: max(|UU* - I|, |U*U - I|)
  double symplectic_residual = 0.0; // algebra: max|X^t J + J X|; group: max|U^t J U - J|
};

inline constexpr double kMembershipTol = 1e-12;

MembershipReport sp_algebra_check(const ComplexMatrix &x, double tol = kMembershipTol);
MembershipReport sp_group_check(const ComplexMatrix &u, double tol = kMembershipTol);

struct SpAlgebraElement {
  int k = 0;
  ComplexMatrix a; // k x k skew-Hermitian
  ComplexMatrix b; // k x k symmetric
  ComplexMatrix x; // [[A, B], [-conj(B), -A^t]]
};

SpAlgebraElement sp_algebra_from_blocks(const ComplexMatrix &a, const ComplexMatrix &b);
SpAlgebraElement random_sp_algebra(int k, std::uint64_t seed);

// Block sum of X (rank k) and Y (rank k') re-interleaved so the result lies in
// sp(k + k') for the rank-(k + k') J.
ComplexMatrix sp_direct_sum(const ComplexMatrix &x, const ComplexMatrix &y);
// Position of row/column `index` of a rank-`k` summand placed at block offset
// `offset` inside a rank-`total` direct sum.
int sp_embed_index(int index, int k, int offset, int total);

struct CharPoly {
  // det(lambda I + iX) = sum_r e[r] lambda^{2k - r}, e[0] = 1.
  std::vector<double> coeffs;
  // f_i = (-1)^i e[2i], i = 1..k.
  std::vector<double> f;
  double odd_residual = 0.0; // max |e[odd]|
  double scale = 1.0;        // max(1, spectral radius)^2k
};

// Throws InvalidInput if X fails sp_algebra_check (at tolerance `member_tol`)
// or if an odd coefficient exceeds 1e-9 * scale.
CharPoly char_poly(const ComplexMatrix &x, double member_tol = 1e-10);
std::vector<double> char_poly_coeffs(const ComplexMatrix &x);

// 1/2 (trace(A^2) - (trace A)^2) with A = iX.
double f1_closed_form(const ComplexMatrix &x);

} // namespace chernforge
