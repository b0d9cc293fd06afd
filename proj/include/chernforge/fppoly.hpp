#pragma once

// Sparse multivariate polynomials over F_p, p = 2^61 - 1, in at most 64
// variables with exponents below 16.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chernforge {

inline constexpr std::uint64_t kFieldPrime = (std::uint64_t{1} << 61) - 1;
inline constexpr int kMaxVariables = 64;
inline constexpr int kMaxExponent = 15;

std::uint64_t fp_add(std::uint64_t a, std::uint64_t b);
std::uint64_t fp_sub(std::uint64_t a, std::uint64_t b);
std::uint64_t fp_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t fp_pow(std::uint64_t a, std::uint64_t e);
// Throws std::domain_error for 0.
std::uint64_t fp_inv(std::uint64_t a);
std::uint64_t fp_from_int(long long v);
// Uniform in [1, p).
std::uint64_t fp_random_nonzero(std::mt19937_64 &rng);

// Exponent vector packed four bits per variable.
struct Monomial {
  std::array<std::uint64_t, 4> words{};

  int exponent(int var) const { return static_cast<int>((words[var / 16] >> (4 * (var % 16))) & 0xF); }
  void set_exponent(int var, int e);
  int total_degree() const;
  std::vector<int> support() const;
  // Throws BudgetExceeded when an exponent would exceed kMaxExponent.
  Monomial times(const Monomial &other) const;
  friend bool operator==(const Monomial &, const Monomial &) = default;
  friend auto operator<=>(const Monomial &, const Monomial &) = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial &m) const noexcept;
};

class FpPoly {
public:
  using TermMap = std::unordered_map<Monomial, std::uint64_t, MonomialHash>;

  FpPoly() = default;
  static FpPoly constant(std::uint64_t c);
  static FpPoly variable(int var);

  const TermMap &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  std::vector<int> variables() const;

  void add_term(const Monomial &m, std::uint64_t c);
  FpPoly &operator+=(const FpPoly &o);
  FpPoly &operator-=(const FpPoly &o);
  FpPoly scaled(std::uint64_t c) const;
  friend FpPoly operator+(FpPoly a, const FpPoly &b) { return a += b; }
  friend FpPoly operator-(FpPoly a, const FpPoly &b) { return a -= b; }
  friend FpPoly operator*(const FpPoly &a, const FpPoly &b);
  friend bool operator==(const FpPoly &a, const FpPoly &b) { return a.terms_ == b.terms_; }

  // `point` holds one value per variable index (at least max variable + 1).
  std::uint64_t eval(std::span<const std::uint64_t> point) const;
  // Terms sorted by monomial, for deterministic output.
  std::vector<std::pair<Monomial, std::uint64_t>> sorted_terms() const;

private:
  TermMap terms_;
};

std::string to_string(const FpPoly &p, const std::vector<std::string> &names = {});

} // namespace chernforge
