#include "chernforge/torusforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <tuple>

#include "chernforge/spectral.hpp"

namespace chernforge {

// ---------------------------------------------------------------------------
// Grid

TorusGrid::TorusGrid(int m, int n, std::size_t point_budget) : m_(m), n_(n) {
  if (m < 2 || m > 6) throw ValidationError("torus dimension must lie in [2, 6], got " + std::to_string(m));
  if (n < 4) throw ValidationError("grid needs at least 4 points per axis, got " + std::to_string(n));
  points_ = 1;
  for (int a = 0; a < m; ++a) {
    points_ *= static_cast<std::size_t>(n);
    if (points_ > point_budget) throw BudgetExceeded("grid " + std::to_string(n) + "^" + std::to_string(m) + " exceeds the point budget");
  }
}

std::size_t TorusGrid::stride(int axis) const {
  std::size_t s = 1;
  for (int a = axis + 1; a < m_; ++a) s *= static_cast<std::size_t>(n_);
  return s;
}

double TorusGrid::coord(std::size_t index, int axis) const {
  const std::size_t i = (index / stride(axis)) % static_cast<std::size_t>(n_);
  return static_cast<double>(i) / n_;
}

// ---------------------------------------------------------------------------
// Operator tables

namespace {

struct DerivEntry {
  std::size_t in;  // degree-p component
  std::size_t out; // degree-(p+1) component
  int axis;
  int sign;
};

struct WedgeEntry {
  std::size_t a;
  std::size_t b;
  std::size_t out;
  int sign;
};

const std::vector<DerivEntry> &deriv_table(int m, int p) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<DerivEntry>> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace({m, p});
  if (inserted) {
    const auto &in_basis = form_basis(m, p);
    const auto &out_basis = form_basis(m, p + 1);
    for (std::size_t i = 0; i < in_basis.keys.size(); ++i) {
      for (int axis = 0; axis < m; ++axis) {
        const FormKey single{axis};
        const int sign = shuffle_sign(single, in_basis.keys[i]);
        if (sign == 0) continue;
        it->second.push_back({i, out_basis.index_of(key_union(single, in_basis.keys[i])), axis, sign});
      }
    }
  }
  return it->second;
}

const std::vector<WedgeEntry> &wedge_table(int m, int p, int q) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<WedgeEntry>> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace({m, p, q});
  if (inserted) {
    const auto &ba = form_basis(m, p);
    const auto &bb = form_basis(m, q);
    const auto &bo = form_basis(m, p + q);
    for (std::size_t i = 0; i < ba.keys.size(); ++i) {
      for (std::size_t j = 0; j < bb.keys.size(); ++j) {
        const int sign = shuffle_sign(ba.keys[i], bb.keys[j]);
        if (sign == 0) continue;
        it->second.push_back({i, j, bo.index_of(key_union(ba.keys[i], bb.keys[j])), sign});
      }
    }
  }
  return it->second;
}

// dst += i * scale * sym * src, without the NaN-safe complex multiply.
inline void add_i_times(std::vector<Complex> &dst, const std::vector<Complex> &src, std::span<const double> sym,
                        double scale) {
  const std::size_t ns = dst.size();
  for (std::size_t j = 0; j < ns; ++j) {
    const double f = scale * sym[j];
    dst[j] += Complex(-f * src[j].imag(), f * src[j].real());
  }
}

// Same, with the multiplier divided by the Laplacian symbol (zero where it vanishes).
inline void add_i_times_inv_lap(std::vector<Complex> &dst, const std::vector<Complex> &src, std::span<const double> sym,
                                std::span<const double> lap, double scale) {
  const std::size_t ns = dst.size();
  for (std::size_t j = 0; j < ns; ++j) {
    if (lap[j] == 0.0) continue;
    const double f = scale * sym[j] / lap[j];
    dst[j] += Complex(-f * src[j].imag(), f * src[j].real());
  }
}

double sup_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

} // namespace

// ---------------------------------------------------------------------------
// DiffForm

DiffForm::DiffForm(TorusGrid grid, int degree) : grid_(grid), degree_(degree) {
  const auto &basis = form_basis(grid.dim(), degree);
  comps_.assign(basis.keys.size(), std::vector<double>(grid.points(), 0.0));
}

DiffForm DiffForm::constant(const TorusGrid &grid, int degree, std::span<const double> coefficients) {
  DiffForm f(grid, degree);
  if (coefficients.size() != f.num_components()) throw DegreeError("constant form: wrong number of coefficients");
  for (std::size_t c = 0; c < f.num_components(); ++c) std::fill(f.comps_[c].begin(), f.comps_[c].end(), coefficients[c]);
  return f;
}

DiffForm DiffForm::monomial(const TorusGrid &grid, const FormKey &key, std::vector<double> values) {
  DiffForm f(grid, static_cast<int>(key.size()));
  if (values.size() != grid.points()) throw GridMismatch("monomial form: value count differs from grid size");
  f.comps_[form_basis(grid.dim(), f.degree_).index_of(key)] = std::move(values);
  return f;
}

std::span<const double> DiffForm::component(const FormKey &key) const {
  return comps_[form_basis(grid_.dim(), degree_).index_of(key)];
}

std::span<double> DiffForm::component(const FormKey &key) {
  return comps_[form_basis(grid_.dim(), degree_).index_of(key)];
}

double DiffForm::sup_norm() const {
  double s = 0.0;
  for (const auto &c : comps_) s = std::max(s, sup_of(c));
  return s;
}

double DiffForm::mean_square() const {
  double s = 0.0;
  for (const auto &c : comps_) {
    for (double x : c) s += x * x;
  }
  return grid_.points() == 0 ? 0.0 : s / static_cast<double>(grid_.points());
}

bool DiffForm::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(),
                     [](const auto &c) { return std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; }); });
}

void require_same_grid(const DiffForm &a, const DiffForm &b, const char *what) {
  if (!(a.grid() == b.grid())) throw GridMismatch(std::string(what) + ": forms live on different grids");
}

DiffForm &DiffForm::add_scaled(double s, const DiffForm &other) {
  require_same_grid(*this, other, "add");
  if (degree_ != other.degree_) throw DegreeError("add: degree mismatch");
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    auto &dst = comps_[c];
    const auto &src = other.comps_[c];
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
  }
  return *this;
}

DiffForm &DiffForm::operator+=(const DiffForm &other) { return add_scaled(1.0, other); }
DiffForm &DiffForm::operator-=(const DiffForm &other) { return add_scaled(-1.0, other); }

DiffForm &DiffForm::operator*=(double s) {
  for (auto &c : comps_) {
    for (double &x : c) x *= s;
  }
  return *this;
}

double dot(const DiffForm &a, const DiffForm &b) {
  require_same_grid(a, b, "dot");
  if (a.degree_ != b.degree_) throw DegreeError("dot: degree mismatch");
  double s = 0.0;
  for (std::size_t c = 0; c < a.comps_.size(); ++c) {
    for (std::size_t i = 0; i < a.comps_[c].size(); ++i) s += a.comps_[c][i] * b.comps_[c][i];
  }
  return s;
}

double sup_distance(const DiffForm &a, const DiffForm &b) {
  require_same_grid(a, b, "sup_distance");
  if (a.degree_ != b.degree_) throw DegreeError("sup_distance: degree mismatch");
  double s = 0.0;
  for (std::size_t c = 0; c < a.comps_.size(); ++c) {
    for (std::size_t i = 0; i < a.comps_[c].size(); ++i) s = std::max(s, std::abs(a.comps_[c][i] - b.comps_[c][i]));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Algebra

void wedge_accumulate(DiffForm &out, const DiffForm &a, const DiffForm &b, double scale) {
  require_same_grid(a, b, "wedge");
  require_same_grid(out, a, "wedge");
  const int m = a.grid().dim();
  if (a.degree() + b.degree() > m) throw DegreeError("wedge: degree overflow");
  if (out.degree() != a.degree() + b.degree()) throw DegreeError("wedge: output degree mismatch");
  const std::size_t np = a.grid().points();
  for (const auto &e : wedge_table(m, a.degree(), b.degree())) {
    auto dst = out.component(e.out);
    const auto x = a.component(e.a);
    const auto y = b.component(e.b);
    const double s = scale * e.sign;
    for (std::size_t i = 0; i < np; ++i) dst[i] += s * x[i] * y[i];
  }
}

DiffForm wedge(const DiffForm &a, const DiffForm &b) {
  require_same_grid(a, b, "wedge");
  if (a.degree() + b.degree() > a.grid().dim()) throw DegreeError("wedge: degree overflow");
  DiffForm out(a.grid(), a.degree() + b.degree());
  wedge_accumulate(out, a, b);
  return out;
}

DiffForm wedge_adjoint(const DiffForm &y, const DiffForm &b) {
  require_same_grid(y, b, "wedge_adjoint");
  const int p = y.degree() - b.degree();
  if (p < 0) throw DegreeError("wedge_adjoint: degree underflow");
  DiffForm g(y.grid(), p);
  const std::size_t np = y.grid().points();
  for (const auto &e : wedge_table(y.grid().dim(), p, b.degree())) {
    auto dst = g.component(e.a);
    const auto yy = y.component(e.out);
    const auto bb = b.component(e.b);
    for (std::size_t i = 0; i < np; ++i) dst[i] += e.sign * yy[i] * bb[i];
  }
  return g;
}

DiffForm exterior_d(const DiffForm &a) {
  const int m = a.grid().dim();
  if (a.degree() >= m) throw DegreeError("exterior_d of a top-degree form");
  auto &ctx = spectral_context(a.grid());
  const auto spec = to_spectrum(a);
  const std::size_t ns = ctx.spectrum_size();
  DiffForm out(a.grid(), a.degree() + 1);
  std::vector<std::vector<Complex>> acc(out.num_components(), std::vector<Complex>(ns));
  for (const auto &e : deriv_table(m, a.degree())) add_i_times(acc[e.out], spec[e.in], ctx.symbol(e.axis), e.sign);
  for (std::size_t c = 0; c < out.num_components(); ++c) ctx.inverse(acc[c], out.component(c));
  return out;
}

DiffForm codifferential(const DiffForm &a) {
  const int m = a.grid().dim();
  if (a.degree() == 0) throw DegreeError("codifferential of a 0-form");
  auto &ctx = spectral_context(a.grid());
  const auto spec = to_spectrum(a);
  const std::size_t ns = ctx.spectrum_size();
  DiffForm out(a.grid(), a.degree() - 1);
  std::vector<std::vector<Complex>> acc(out.num_components(), std::vector<Complex>(ns));
  for (const auto &e : deriv_table(m, a.degree() - 1)) add_i_times(acc[e.in], spec[e.out], ctx.symbol(e.axis), -e.sign);
  for (std::size_t c = 0; c < out.num_components(); ++c) ctx.inverse(acc[c], out.component(c));
  return out;
}

double integrate(const DiffForm &top_form) {
  if (top_form.degree() != top_form.grid().dim()) throw DegreeError("integrate expects a top-degree form");
  const auto c = top_form.component(0);
  double s = 0.0;
  for (double x : c) s += x;
  return s / static_cast<double>(c.size());
}

DiffForm harmonic_part(const DiffForm &a) {
  std::vector<double> means(a.num_components());
  for (std::size_t c = 0; c < a.num_components(); ++c) {
    double s = 0.0;
    for (double x : a.component(c)) s += x;
    means[c] = s / static_cast<double>(a.grid().points());
  }
  return DiffForm::constant(a.grid(), a.degree(), means);
}

ExactnessReport is_exact(const DiffForm &a, double tol) {
  if (a.degree() == 0) throw DegreeError("is_exact needs degree >= 1");
  ExactnessReport r;
  r.tol = tol;
  r.closed_residual = a.degree() < a.grid().dim() ? exterior_d(a).sup_norm() : 0.0;
  r.harmonic_norm = harmonic_part(a).sup_norm();
  r.exact = r.closed_residual < tol && r.harmonic_norm < tol;
  return r;
}

ExactnessReport is_exact(const DiffForm &a) { return is_exact(a, 1e-9 * std::max(1.0, a.sup_norm())); }

DiffForm hodge_primitive(const DiffForm &sigma, double tol) {
  if (sigma.degree() == 0) throw DegreeError("hodge_primitive needs degree >= 1");
  const auto report = is_exact(sigma, tol);
  if (report.closed_residual >= tol)
    throw NotClosed("form is not closed: sup|d sigma| = " + std::to_string(report.closed_residual));
  if (report.harmonic_norm >= tol)
    throw HarmonicObstruction("form has a harmonic part of size " + std::to_string(report.harmonic_norm));

  const int m = sigma.grid().dim();
  auto &ctx = spectral_context(sigma.grid());
  const auto spec = to_spectrum(sigma);
  const std::size_t ns = ctx.spectrum_size();
  const auto lap = ctx.laplacian();
  DiffForm beta(sigma.grid(), sigma.degree() - 1);
  std::vector<std::vector<Complex>> acc(beta.num_components(), std::vector<Complex>(ns));
  for (const auto &e : deriv_table(m, sigma.degree() - 1))
    add_i_times_inv_lap(acc[e.in], spec[e.out], ctx.symbol(e.axis), lap, -e.sign);
  for (std::size_t c = 0; c < beta.num_components(); ++c) ctx.inverse(acc[c], beta.component(c));
  return beta;
}

namespace {
// d composed with (delta G) or delta, evaluated mode by mode.
DiffForm d_after_codiff(const DiffForm &a, bool inverse_laplacian) {
  const int m = a.grid().dim();
  auto &ctx = spectral_context(a.grid());
  const auto spec = to_spectrum(a);
  const std::size_t ns = ctx.spectrum_size();
  const auto lap = ctx.laplacian();
  const auto &table = deriv_table(m, a.degree() - 1);
  std::vector<std::vector<Complex>> mid(form_basis(m, a.degree() - 1).keys.size(), std::vector<Complex>(ns));
  for (const auto &e : table) {
    if (inverse_laplacian)
      add_i_times_inv_lap(mid[e.in], spec[e.out], ctx.symbol(e.axis), lap, -e.sign);
    else
      add_i_times(mid[e.in], spec[e.out], ctx.symbol(e.axis), -e.sign);
  }
  std::vector<std::vector<Complex>> acc(a.num_components(), std::vector<Complex>(ns));
  for (const auto &e : table) add_i_times(acc[e.out], mid[e.in], ctx.symbol(e.axis), e.sign);
  DiffForm out(a.grid(), a.degree());
  for (std::size_t c = 0; c < out.num_components(); ++c) ctx.inverse(acc[c], out.component(c));
  return out;
}
} // namespace

DiffForm exact_projection(const DiffForm &a) {
  if (a.degree() == 0) return DiffForm(a.grid(), 0);
  return d_after_codiff(a, true);
}

DiffForm d_codifferential(const DiffForm &a) {
  if (a.degree() == 0) throw DegreeError("codifferential of a 0-form");
  return d_after_codiff(a, false);
}

int spectral_bandwidth(const DiffForm &a, double rel_tol) {
  auto &ctx = spectral_context(a.grid());
  const int m = a.grid().dim();
  int band = -1;
  std::vector<Complex> spec(ctx.spectrum_size());
  for (std::size_t c = 0; c < a.num_components(); ++c) {
    ctx.forward(a.component(c), spec);
    double peak = 0.0;
    for (const auto &z : spec) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) continue;
    for (std::size_t j = 0; j < spec.size(); ++j) {
      if (std::abs(spec[j]) <= rel_tol * peak) continue;
      for (int ax = 0; ax < m; ++ax) band = std::max(band, std::abs(ctx.wavenumber(j, ax)));
    }
  }
  return band;
}

// ---------------------------------------------------------------------------
// Trig evaluation

namespace {
void check_spec_against_grid(const TrigSpec &spec, const TorusGrid &grid) {
  spec.validate();
  if (spec.m != grid.dim()) throw GridMismatch("TrigSpec dimension differs from the grid");
  if (!grid.resolves(spec.max_harmonic()))
    throw ResolutionError("grid n=" + std::to_string(grid.n()) + " does not resolve harmonic " +
                          std::to_string(spec.max_harmonic()) + " (needs n > 2h)");
}
} // namespace

DiffForm eval_trig_spec(const TrigSpec &spec, const TorusGrid &grid) {
  check_spec_against_grid(spec, grid);
  auto &ctx = spectral_context(grid);
  const auto &basis = form_basis(grid.dim(), spec.degree);
  const double total = static_cast<double>(grid.points());
  std::vector<std::vector<Complex>> acc(basis.keys.size());
  for (const auto &term : spec.terms) {
    auto &dst = acc[basis.index_of(term.component)];
    if (dst.empty()) dst.assign(ctx.spectrum_size(), Complex{});
    std::vector<int> neg(grid.dim());
    for (const auto &h : term.harmonics) {
      const bool zero = std::all_of(h.k.begin(), h.k.end(), [](int v) { return v == 0; });
      if (zero) {
        dst[0] += total * h.cos;
        continue;
      }
      for (int a = 0; a < grid.dim(); ++a) neg[a] = -h.k[a];
      const long ip = ctx.spectral_index(h.k);
      const long in = ctx.spectral_index(neg);
      if (ip >= 0) dst[static_cast<std::size_t>(ip)] += 0.5 * total * Complex(h.cos, -h.sin);
      if (in >= 0) dst[static_cast<std::size_t>(in)] += 0.5 * total * Complex(h.cos, h.sin);
    }
  }
  DiffForm out(grid, spec.degree);
  for (std::size_t c = 0; c < acc.size(); ++c) {
    if (!acc[c].empty()) ctx.inverse(acc[c], out.component(c));
  }
  return out;
}

DiffForm eval_trig_spec_direct(const TrigSpec &spec, const TorusGrid &grid) {
  check_spec_against_grid(spec, grid);
  DiffForm out(grid, spec.degree);
  std::vector<double> x(grid.dim());
  for (std::size_t i = 0; i < grid.points(); ++i) {
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coord(i, a);
    const auto v = trig_eval_point(spec, x);
    for (std::size_t c = 0; c < v.size(); ++c) out.component(c)[i] = v[c];
  }
  return out;
}

std::pair<DiffForm, TrigSpec> random_form(const TorusGrid &grid, int degree, int h, std::uint64_t seed) {
  if (h < 0) throw ValidationError("max harmonic must be nonnegative");
  if (!grid.resolves(h)) throw ResolutionError("random_form: grid does not resolve harmonic " + std::to_string(h));
  std::mt19937_64 rng(seed);
  TrigSpec spec;
  spec.m = grid.dim();
  spec.degree = degree;
  for (const auto &key : form_basis(grid.dim(), degree).keys) {
    TrigTerm term{key, random_harmonics(grid.dim(), h, rng)};
    if (!term.harmonics.empty()) spec.terms.push_back(std::move(term));
  }
  return {eval_trig_spec(spec, grid), spec};
}

} // namespace chernforge
