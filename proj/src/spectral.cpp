#include "chernforge/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace chernforge {

namespace {
// FFTW's planner is not reentrant.
std::mutex &planner_mutex() {
  static std::mutex mu;
  return mu;
}
} // namespace

struct SpectralContext::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  double *real_buf = nullptr;
  fftw_complex *cplx_buf = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c != nullptr) fftw_destroy_plan(r2c);
    if (c2r != nullptr) fftw_destroy_plan(c2r);
    fftw_free(real_buf);
    fftw_free(cplx_buf);
  }
};

SpectralContext::SpectralContext(const TorusGrid &grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const int m = grid.dim();
  const int n = grid.n();
  std::vector<int> dims(m, n);
  spectrum_size_ = grid.points() / n * (n / 2 + 1);

  {
    std::lock_guard lock(planner_mutex());
    plans_->real_buf = fftw_alloc_real(grid.points());
    plans_->cplx_buf = fftw_alloc_complex(spectrum_size_);
    // FFTW_ESTIMATE keeps plan selection, and therefore rounding, reproducible.
    plans_->r2c = fftw_plan_dft_r2c(m, dims.data(), plans_->real_buf, plans_->cplx_buf, FFTW_ESTIMATE);
    plans_->c2r = fftw_plan_dft_c2r(m, dims.data(), plans_->cplx_buf, plans_->real_buf, FFTW_ESTIMATE);
  }
  if (plans_->r2c == nullptr || plans_->c2r == nullptr) throw Error("FFTW planning failed");

  symbols_.assign(m, std::vector<double>(spectrum_size_));
  laplacian_.assign(spectrum_size_, 0.0);
  for (std::size_t j = 0; j < spectrum_size_; ++j) {
    for (int a = 0; a < m; ++a) {
      const int k = wavenumber(j, a);
      const double s = (2 * std::abs(k) == n) ? 0.0 : 2.0 * std::numbers::pi * k;
      symbols_[a][j] = s;
      laplacian_[j] += s * s;
    }
  }
}

SpectralContext::~SpectralContext() = default;

int SpectralContext::wavenumber(std::size_t j, int axis) const {
  const int m = grid_.dim();
  const int n = grid_.n();
  const std::size_t last = static_cast<std::size_t>(n / 2 + 1);
  if (axis == m - 1) return static_cast<int>(j % last);
  std::size_t rest = j / last;
  for (int a = m - 2; a > axis; --a) rest /= static_cast<std::size_t>(n);
  const int i = static_cast<int>(rest % static_cast<std::size_t>(n));
  return i <= n / 2 ? i : i - n;
}

long SpectralContext::spectral_index(std::span<const int> k) const {
  const int m = grid_.dim();
  const int n = grid_.n();
  if (static_cast<int>(k.size()) != m) throw DegreeError("wavevector dimension mismatch");
  const int k_last = ((k[m - 1] % n) + n) % n;
  if (k_last > n / 2) return -1;
  long idx = 0;
  for (int a = 0; a < m - 1; ++a) idx = idx * n + ((k[a] % n) + n) % n;
  return idx * (n / 2 + 1) + k_last;
}

void SpectralContext::forward(std::span<const double> field, std::span<Complex> spectrum) {
  std::memcpy(plans_->real_buf, field.data(), grid_.points() * sizeof(double));
  fftw_execute(plans_->r2c);
  std::memcpy(static_cast<void *>(spectrum.data()), plans_->cplx_buf, spectrum_size_ * sizeof(fftw_complex));
}

void SpectralContext::inverse(std::span<const Complex> spectrum, std::span<double> field) {
  std::memcpy(plans_->cplx_buf, spectrum.data(), spectrum_size_ * sizeof(fftw_complex));
  fftw_execute(plans_->c2r);
  const double scale = 1.0 / static_cast<double>(grid_.points());
  for (std::size_t i = 0; i < grid_.points(); ++i) field[i] = plans_->real_buf[i] * scale;
}

SpectralContext &spectral_context(const TorusGrid &grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<SpectralContext>> cache;
  auto &slot = cache[{grid.dim(), grid.n()}];
  if (!slot) slot = std::make_unique<SpectralContext>(grid);
  return *slot;
}

std::vector<std::vector<Complex>> to_spectrum(const DiffForm &a) {
  auto &ctx = spectral_context(a.grid());
  std::vector<std::vector<Complex>> out(a.num_components(), std::vector<Complex>(ctx.spectrum_size()));
  for (std::size_t c = 0; c < a.num_components(); ++c) ctx.forward(a.component(c), out[c]);
  return out;
}

} // namespace chernforge
