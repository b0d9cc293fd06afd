#include "chernforge/fppoly.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "chernforge/errors.hpp"

namespace chernforge {

std::uint64_t fp_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kFieldPrime ? s - kFieldPrime : s;
}

std::uint64_t fp_sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kFieldPrime - b; }

std::uint64_t fp_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  // 2^61 = 1 mod p
  std::uint64_t lo = static_cast<std::uint64_t>(z) & kFieldPrime;
  std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
  return fp_add(lo, hi);
}

std::uint64_t fp_pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1) r = fp_mul(r, a);
    a = fp_mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t fp_inv(std::uint64_t a) {
  if (a % kFieldPrime == 0) throw std::domain_error("fp_inv of zero");
  return fp_pow(a, kFieldPrime - 2);
}

std::uint64_t fp_from_int(long long v) {
  const long long p = static_cast<long long>(kFieldPrime);
  long long r = v % p;
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t fp_random_nonzero(std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::uint64_t> dist(1, kFieldPrime - 1);
  return dist(rng);
}

// ---------------------------------------------------------------------------
// Monomial

void Monomial::set_exponent(int var, int e) {
  if (var < 0 || var >= kMaxVariables) throw BudgetExceeded("variable index outside the 64-variable universe");
  if (e < 0 || e > kMaxExponent) throw BudgetExceeded("exponent outside [0, 15]");
  const int shift = 4 * (var % 16);
  auto &w = words[var / 16];
  w = (w & ~(std::uint64_t{0xF} << shift)) | (static_cast<std::uint64_t>(e) << shift);
}

int Monomial::total_degree() const {
  int d = 0;
  for (int v = 0; v < kMaxVariables; ++v) d += exponent(v);
  return d;
}

std::vector<int> Monomial::support() const {
  std::vector<int> out;
  for (int w = 0; w < 4; ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      const int nib = std::countr_zero(bits) / 4;
      out.push_back(16 * w + nib);
      bits &= ~(std::uint64_t{0xF} << (4 * nib));
    }
  }
  return out;
}

Monomial Monomial::times(const Monomial &other) const {
  constexpr std::uint64_t high = 0x8888888888888888ULL;
  Monomial r;
  for (int w = 0; w < 4; ++w) {
    const std::uint64_t a = words[w];
    const std::uint64_t b = other.words[w];
    const std::uint64_t s = a + b;
    // Bit 3 of each nibble of the carry vector flags a nibble overflow.
    const std::uint64_t carry = (a & b) | ((a | b) & ~s);
    if ((carry & high) != 0) throw BudgetExceeded("monomial exponent overflow");
    r.words[w] = s;
  }
  return r;
}

std::size_t MonomialHash::operator()(const Monomial &m) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto w : m.words) {
    h ^= w;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// FpPoly

FpPoly FpPoly::constant(std::uint64_t c) {
  FpPoly p;
  p.add_term(Monomial{}, c % kFieldPrime);
  return p;
}

FpPoly FpPoly::variable(int var) {
  Monomial m;
  m.set_exponent(var, 1);
  FpPoly p;
  p.add_term(m, 1);
  return p;
}

int FpPoly::total_degree() const {
  int d = 0;
  for (const auto &[m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

std::vector<int> FpPoly::variables() const {
  Monomial all;
  for (const auto &[m, c] : terms_)
    for (int w = 0; w < 4; ++w) all.words[w] |= m.words[w];
  std::vector<int> out;
  for (int v = 0; v < kMaxVariables; ++v)
    if (all.exponent(v) != 0) out.push_back(v);
  return out;
}

void FpPoly::add_term(const Monomial &m, std::uint64_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second = fp_add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

FpPoly &FpPoly::operator+=(const FpPoly &o) {
  for (const auto &[m, c] : o.terms_) add_term(m, c);
  return *this;
}

FpPoly &FpPoly::operator-=(const FpPoly &o) {
  for (const auto &[m, c] : o.terms_) add_term(m, fp_sub(0, c));
  return *this;
}

FpPoly FpPoly::scaled(std::uint64_t c) const {
  FpPoly out;
  c %= kFieldPrime;
  if (c == 0) return out;
  for (const auto &[m, v] : terms_) out.terms_.emplace(m, fp_mul(v, c));
  return out;
}

FpPoly operator*(const FpPoly &a, const FpPoly &b) {
  FpPoly out;
  out.terms_.reserve(a.size() * b.size());
  for (const auto &[ma, ca] : a.terms_)
    for (const auto &[mb, cb] : b.terms_) out.add_term(ma.times(mb), fp_mul(ca, cb));
  return out;
}

std::uint64_t FpPoly::eval(std::span<const std::uint64_t> point) const {
  std::uint64_t acc = 0;
  for (const auto &[m, c] : terms_) {
    std::uint64_t v = c;
    for (int var : m.support()) {
      if (static_cast<std::size_t>(var) >= point.size()) throw ValidationError("evaluation point is too short");
      v = fp_mul(v, fp_pow(point[var], static_cast<std::uint64_t>(m.exponent(var))));
    }
    acc = fp_add(acc, v);
  }
  return acc;
}

std::vector<std::pair<Monomial, std::uint64_t>> FpPoly::sorted_terms() const {
  std::vector<std::pair<Monomial, std::uint64_t>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
  return out;
}

std::string to_string(const FpPoly &p, const std::vector<std::string> &names) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto &[m, c] : p.sorted_terms()) {
    if (!s.empty()) s += " + ";
    s += std::to_string(c);
    for (int v : m.support()) {
      s += "*";
      s += static_cast<std::size_t>(v) < names.size() ? names[v] : "v" + std::to_string(v);
      if (m.exponent(v) > 1) s += "^" + std::to_string(m.exponent(v));
    }
  }
  return s;
}

} // namespace chernforge
