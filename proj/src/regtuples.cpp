#include "chernforge/regtuples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "chernforge/errors.hpp"

namespace chernforge {

OneFormTuple::OneFormTuple(TorusGrid g, std::vector<DiffForm> f) : grid(g), forms(std::move(f)) { validate(); }

void OneFormTuple::validate() const {
  if (forms.empty()) throw ValidationError("tuple must hold at least one form");
  for (const auto &w : forms) {
    if (!(w.grid() == grid)) throw GridMismatch("tuple entries live on different grids");
    if (w.degree() != 1) throw DegreeError("tuple entries must be 1-forms");
  }
  if (!specs.empty() && specs.size() != forms.size()) throw ValidationError("tuple spec count differs from form count");
}

int q_min(int m) {
  if (m < 1) throw ValidationError("q_min: m must be >= 1");
  return m * (m + 1) / 2;
}

namespace {
constexpr int kHistogramBins = 14;

std::size_t histogram_bin(double s) {
  if (!(s > 0.0)) return 0;
  const int b = static_cast<int>(std::floor(std::log10(s))) + 12;
  return static_cast<std::size_t>(std::clamp(b, 0, kHistogramBins - 1));
}

// Rank and the `target`-th singular value of a small dense matrix.
std::pair<int, double> rank_and_sigma(const Eigen::MatrixXd &a, int target, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto &s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (top > 0.0 && s(i) > rel_tol * top) ++rank;
  const double sigma = target <= s.size() && target > 0 ? s(target - 1) : 0.0;
  return {rank, sigma};
}
} // namespace

RegularityCertificate regularity_check(const OneFormTuple &t, const RegularityOptions &opts) {
  t.validate();
  const int m = t.grid.dim();
  const int q = static_cast<int>(t.size());
  const std::size_t np = t.grid.points();
  std::vector<DiffForm> dw;
  dw.reserve(t.size());
  for (const auto &w : t.forms) dw.push_back(exterior_d(w));

  RegularityCertificate cert;
  cert.target_rank = static_cast<int>(binomial(m, 2));
  cert.rank_map.resize(np);
  cert.sigma_histogram.assign(kHistogramBins, 0);
  cert.min_rank = std::numeric_limits<int>::max();
  cert.min_sigma = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd a(cert.target_rank, q);
  for (std::size_t p = 0; p < np; ++p) {
    for (int i = 0; i < q; ++i)
      for (int c = 0; c < cert.target_rank; ++c) a(c, i) = dw[i].component(c)[p];
    const auto [rank, sigma] = rank_and_sigma(a, cert.target_rank, opts.rank_rel_tol);
    cert.rank_map[p] = rank;
    cert.min_rank = std::min(cert.min_rank, rank);
    cert.min_sigma = std::min(cert.min_sigma, sigma);
    ++cert.sigma_histogram[histogram_bin(sigma)];
  }
  cert.pass = cert.min_rank == cert.target_rank && cert.min_sigma > opts.sigma_floor;
  return cert;
}

SurjectivityReport surjectivity_check_L(const OneFormTuple &t, const RegularityOptions &opts) {
  t.validate();
  const int m = t.grid.dim();
  if (m < 3) throw DegreeError("surjectivity_check_L needs m >= 3");
  const int q = static_cast<int>(t.size());
  const std::size_t np = t.grid.points();
  std::vector<DiffForm> dw;
  for (const auto &w : t.forms) dw.push_back(exterior_d(w));

  // Column (a, i) is dx_a ^ d w_i(x); precompute the index pattern once.
  struct Slot {
    int col_axis;
    std::size_t two_comp;
    std::size_t row;
    int sign;
  };
  std::vector<Slot> slots;
  const auto &b2 = form_basis(m, 2);
  const auto &b3 = form_basis(m, 3);
  for (int ax = 0; ax < m; ++ax) {
    for (std::size_t c = 0; c < b2.keys.size(); ++c) {
      const int s = shuffle_sign(FormKey{ax}, b2.keys[c]);
      if (s != 0) slots.push_back({ax, c, b3.index_of(key_union(FormKey{ax}, b2.keys[c])), s});
    }
  }

  SurjectivityReport r;
  r.target_rank = static_cast<int>(binomial(m, 3));
  r.min_rank = std::numeric_limits<int>::max();
  r.min_sigma = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd a(r.target_rank, m * q);
  for (std::size_t p = 0; p < np; ++p) {
    a.setZero();
    for (int i = 0; i < q; ++i)
      for (const auto &s : slots) a(static_cast<Eigen::Index>(s.row), i * m + s.col_axis) += s.sign * dw[i].component(s.two_comp)[p];
    const auto [rank, sigma] = rank_and_sigma(a, r.target_rank, opts.rank_rel_tol);
    r.min_rank = std::min(r.min_rank, rank);
    r.min_sigma = std::min(r.min_sigma, sigma);
  }
  r.surjective = r.min_rank == r.target_rank;
  r.regularity_pass = regularity_check(t, opts).pass;
  r.consistent = !r.regularity_pass || r.surjective;
  return r;
}

DiffForm null_sum(const OneFormTuple &t) {
  t.validate();
  if (t.grid.dim() < 3) throw DegreeError("null_sum needs m >= 3");
  DiffForm out(t.grid, 3);
  for (const auto &w : t.forms) wedge_accumulate(out, w, exterior_d(w));
  return out;
}

namespace {
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t attempt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (attempt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrigSpec scalar_spec(int m, std::vector<Harmonic> harmonics) {
  TrigSpec s;
  s.m = m;
  s.degree = 0;
  if (!harmonics.empty()) s.terms.push_back({FormKey{}, std::move(harmonics)});
  return s;
}
} // namespace

GeneratedTuple generate_null_tuple(const TorusGrid &grid, int q, int h, std::uint64_t seed,
                                   const NullTupleOptions &opts) {
  const int m = grid.dim();
  if (q < q_min(m))
    throw QTooSmall("q = " + std::to_string(q) + " is below q_min(" + std::to_string(m) + ") = " + std::to_string(q_min(m)));
  if (h < 1) throw ValidationError("generate_null_tuple: max harmonic must be >= 1");
  if (!grid.resolves(2 * h))
    throw ResolutionError("generate_null_tuple: grid n=" + std::to_string(grid.n()) + " does not resolve harmonic " +
                          std::to_string(2 * h) + " of u dv (needs n > 4h)");
  const std::size_t np = grid.points();
  RegularityCertificate last;
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    GeneratedTuple out;
    out.tuple.grid = grid;
    for (int i = 0; i < q; ++i) {
      const TrigSpec u = scalar_spec(m, random_harmonics(m, h, rng));
      const TrigSpec v = scalar_spec(m, random_harmonics(m, h, rng));
      const TrigSpec dv = trig_d(v);
      // Sample u and dv separately and multiply: the product u * d v is exact
      // pointwise, so w ^ d w cancels to roundoff.
      const DiffForm us = eval_trig_spec(u, grid);
      DiffForm w = eval_trig_spec(dv, grid);
      const auto uu = us.component(0);
      for (std::size_t c = 0; c < w.num_components(); ++c) {
        auto wc = w.component(c);
        for (std::size_t p = 0; p < np; ++p) wc[p] *= uu[p];
      }
      out.tuple.forms.push_back(std::move(w));
      out.tuple.specs.emplace_back(trig_wedge(u, dv));
    }
    out.attempts = attempt + 1;
    double w_sup = 0.0, dw_sup = 0.0;
    if (m >= 3) {
      DiffForm ns(grid, 3);
      for (const auto &w : out.tuple.forms) {
        const DiffForm dw = exterior_d(w);
        w_sup = std::max(w_sup, w.sup_norm());
        dw_sup = std::max(dw_sup, dw.sup_norm());
        wedge_accumulate(ns, w, dw);
      }
      out.null_residual = ns.sup_norm();
    }
    out.scale = w_sup * dw_sup;
    if (out.null_residual >= 1e-10 * std::max(1.0, out.scale))
      throw Error("generate_null_tuple: null sum " + std::to_string(out.null_residual) + " did not cancel");
    out.certificate = regularity_check(out.tuple, opts.regularity);
    if (out.certificate.pass) return out;
    last = std::move(out.certificate);
  }
  throw RegularityNotAchieved("no regular null tuple after " + std::to_string(opts.max_retries) +
                              " attempts (last min rank " + std::to_string(last.min_rank) + ", min sigma " +
                              std::to_string(last.min_sigma) + ")");
}

} // namespace chernforge
