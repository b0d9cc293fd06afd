#pragma once

// Exact trigonometric-polynomial description of a differential form on T^m.
// Each component is a finite sum  A cos(2 pi k.x) + B sin(2 pi k.x).  The
// symbolic d and wedge below never touch a grid, so they serve as an analytic
// oracle for the spectral operators.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "chernforge/form_basis.hpp"

namespace chernforge {

struct Harmonic {
  std::vector<int> k;
  double cos = 0.0;
  double sin = 0.0;
};

struct TrigTerm {
  FormKey component; // 0-based axes; serialized 1-based
  std::vector<Harmonic> harmonics;
};

struct TrigSpec {
  int m = 0;
  int degree = 0;
  std::vector<TrigTerm> terms;

  // max_a |k_a| over all harmonics; 0 for constant or empty specs.
  int max_harmonic() const;
  // Throws ValidationError on malformed keys or wavevectors.
  void validate() const;
};

// Merges duplicate components and wavevectors, folds k into the half space
// whose first nonzero entry is positive, drops exact zeros, sorts.
TrigSpec canonicalize(const TrigSpec &s);

TrigSpec trig_add(const TrigSpec &a, const TrigSpec &b);
TrigSpec trig_scale(double s, const TrigSpec &a);
TrigSpec trig_d(const TrigSpec &a);
TrigSpec trig_wedge(const TrigSpec &a, const TrigSpec &b);

// Component values at the point x in form_basis(m, degree) order.
std::vector<double> trig_eval_point(const TrigSpec &s, std::span<const double> x);

// Zero-mean scalar trig polynomial over the half lattice of [-h, h]^m \ {0},
// amplitudes N(0,1)/sqrt(#modes).
std::vector<Harmonic> random_harmonics(int m, int h, std::mt19937_64 &rng);

} // namespace chernforge
