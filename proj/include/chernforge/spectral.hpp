#pragma once

// FFT plumbing for periodic grids. Real fields use the r2c half-spectrum
// layout: axes 0..m-2 full length n, last axis n/2+1.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "chernforge/torusforms.hpp"

namespace chernforge {

using Complex = std::complex<double>;

class SpectralContext {
public:
  explicit SpectralContext(const TorusGrid &grid);
  ~SpectralContext();
  SpectralContext(const SpectralContext &) = delete;
  SpectralContext &operator=(const SpectralContext &) = delete;

  const TorusGrid &grid() const { return grid_; }
  std::size_t spectrum_size() const { return spectrum_size_; }

  // Unnormalized forward transform.
  void forward(std::span<const double> field, std::span<Complex> spectrum);
  // Inverse transform including the 1/N normalization.
  void inverse(std::span<const Complex> spectrum, std::span<double> field);

  // i * symbol(axis)[j] is the derivative multiplier along `axis`: 2 pi k_a,
  // with the Nyquist wavenumber mapped to zero.
  std::span<const double> symbol(int axis) const { return symbols_[axis]; }
  // Sum of squared symbols.
  std::span<const double> laplacian() const { return laplacian_; }
  // Integer wavenumber of spectral entry j along `axis` (Nyquist reported as n/2).
  int wavenumber(std::size_t j, int axis) const;
  // Linear spectral index for the integer wavevector k, or -1 when k lies in the
  // omitted half (last component negative).
  long spectral_index(std::span<const int> k) const;

private:
  struct Plans;
  TorusGrid grid_;
  std::size_t spectrum_size_ = 0;
  std::vector<std::vector<double>> symbols_;
  std::vector<double> laplacian_;
  std::unique_ptr<Plans> plans_;
};

// Per-thread cached context for `grid`.
SpectralContext &spectral_context(const TorusGrid &grid);

// Forward transforms of every component.
std::vector<std::vector<Complex>> to_spectrum(const DiffForm &a);

} // namespace chernforge
