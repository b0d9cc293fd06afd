#include "chernforge/trigspec.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>

#include "chernforge/errors.hpp"

namespace chernforge {

namespace {

using Complex = std::complex<double>;
using Wave = std::vector<int>;
// Coefficients c_k of exp(2 pi i k.x); a real field has c_{-k} = conj(c_k).
using ExpSeries = std::map<Wave, Complex>;
using ExpForm = std::map<FormKey, ExpSeries>;

Wave negate(Wave k) {
  for (int &v : k) v = -v;
  return k;
}

bool is_canonical(const Wave &k) {
  for (int v : k) {
    if (v != 0) return v > 0;
  }
  return true; // zero wave
}

bool is_zero_wave(const Wave &k) {
  return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

ExpForm to_exp(const TrigSpec &s) {
  ExpForm out;
  for (const auto &term : s.terms) {
    auto &series = out[term.component];
    for (const auto &h : term.harmonics) {
      if (is_zero_wave(h.k)) {
        series[h.k] += Complex(h.cos, 0.0);
        continue;
      }
      series[h.k] += Complex(h.cos, -h.sin) * 0.5;
      series[negate(h.k)] += Complex(h.cos, h.sin) * 0.5;
    }
  }
  return out;
}

TrigSpec from_exp(int m, int degree, const ExpForm &f) {
  TrigSpec s;
  s.m = m;
  s.degree = degree;
  for (const auto &[key, series] : f) {
    TrigTerm term;
    term.component = key;
    for (const auto &[k, c] : series) {
      if (!is_canonical(k)) continue;
      Harmonic h;
      h.k = k;
      if (is_zero_wave(k)) {
        h.cos = c.real();
      } else {
        h.cos = 2.0 * c.real();
        h.sin = -2.0 * c.imag();
      }
      if (h.cos != 0.0 || h.sin != 0.0) term.harmonics.push_back(std::move(h));
    }
    if (!term.harmonics.empty()) s.terms.push_back(std::move(term));
  }
  return s;
}

} // namespace

int TrigSpec::max_harmonic() const {
  int h = 0;
  for (const auto &term : terms) {
    for (const auto &hm : term.harmonics) {
      for (int v : hm.k) h = std::max(h, std::abs(v));
    }
  }
  return h;
}

void TrigSpec::validate() const {
  if (m < 1 || m > 6) throw ValidationError("TrigSpec dimension m must lie in [1, 6]");
  if (degree < 0 || degree > m) throw ValidationError("TrigSpec degree outside [0, m]");
  for (const auto &term : terms) {
    if (static_cast<int>(term.component.size()) != degree)
      throw ValidationError("TrigSpec component length differs from degree");
    for (std::size_t i = 0; i < term.component.size(); ++i) {
      const int a = term.component[i];
      if (a < 0 || a >= m) throw ValidationError("TrigSpec component axis out of range");
      if (i > 0 && term.component[i - 1] >= a)
        throw ValidationError("TrigSpec component must be strictly increasing");
    }
    for (const auto &h : term.harmonics) {
      if (static_cast<int>(h.k.size()) != m) throw ValidationError("TrigSpec wavevector length differs from m");
      if (!std::isfinite(h.cos) || !std::isfinite(h.sin)) throw ValidationError("TrigSpec amplitude is not finite");
    }
  }
}

TrigSpec canonicalize(const TrigSpec &s) { return from_exp(s.m, s.degree, to_exp(s)); }

TrigSpec trig_add(const TrigSpec &a, const TrigSpec &b) {
  if (a.m != b.m || a.degree != b.degree) throw DegreeError("trig_add: shape mismatch");
  TrigSpec sum = a;
  sum.terms.insert(sum.terms.end(), b.terms.begin(), b.terms.end());
  return canonicalize(sum);
}

TrigSpec trig_scale(double s, const TrigSpec &a) {
  TrigSpec out = a;
  for (auto &term : out.terms) {
    for (auto &h : term.harmonics) {
      h.cos *= s;
      h.sin *= s;
    }
  }
  return canonicalize(out);
}

TrigSpec trig_d(const TrigSpec &a) {
  if (a.degree >= a.m) throw DegreeError("trig_d of a top-degree form");
  ExpForm in = to_exp(a);
  ExpForm out;
  for (const auto &[key, series] : in) {
    for (int axis = 0; axis < a.m; ++axis) {
      const FormKey single{axis};
      const int sign = shuffle_sign(single, key);
      if (sign == 0) continue;
      auto &dst = out[key_union(single, key)];
      for (const auto &[k, c] : series) {
        if (k[axis] == 0) continue;
        dst[k] += static_cast<double>(sign) * Complex(0.0, 2.0 * std::numbers::pi * k[axis]) * c;
      }
    }
  }
  return from_exp(a.m, a.degree + 1, out);
}

TrigSpec trig_wedge(const TrigSpec &a, const TrigSpec &b) {
  if (a.m != b.m) throw DegreeError("trig_wedge: dimension mismatch");
  if (a.degree + b.degree > a.m) throw DegreeError("trig_wedge: degree overflow");
  ExpForm fa = to_exp(a);
  ExpForm fb = to_exp(b);
  ExpForm out;
  for (const auto &[ka, sa] : fa) {
    for (const auto &[kb, sb] : fb) {
      const int sign = shuffle_sign(ka, kb);
      if (sign == 0) continue;
      auto &dst = out[key_union(ka, kb)];
      for (const auto &[wa, ca] : sa) {
        for (const auto &[wb, cb] : sb) {
          Wave w(wa.size());
          for (std::size_t i = 0; i < w.size(); ++i) w[i] = wa[i] + wb[i];
          dst[w] += static_cast<double>(sign) * ca * cb;
        }
      }
    }
  }
  return from_exp(a.m, a.degree + b.degree, out);
}

std::vector<double> trig_eval_point(const TrigSpec &s, std::span<const double> x) {
  const auto &basis = form_basis(s.m, s.degree);
  std::vector<double> values(basis.keys.size(), 0.0);
  for (const auto &term : s.terms) {
    const std::size_t idx = basis.index_of(term.component);
    double acc = 0.0;
    for (const auto &h : term.harmonics) {
      double phase = 0.0;
      for (int a = 0; a < s.m; ++a) phase += h.k[a] * x[a];
      phase *= 2.0 * std::numbers::pi;
      acc += h.cos * std::cos(phase) + h.sin * std::sin(phase);
    }
    values[idx] += acc;
  }
  return values;
}

std::vector<Harmonic> random_harmonics(int m, int h, std::mt19937_64 &rng) {
  std::vector<Wave> waves;
  if (h > 0) {
    Wave k(m, -h);
    while (true) {
      if (!is_zero_wave(k) && is_canonical(k)) waves.push_back(k);
      int a = m - 1;
      while (a >= 0 && k[a] == h) {
        k[a] = -h;
        --a;
      }
      if (a < 0) break;
      ++k[a];
    }
  }
  std::vector<Harmonic> out;
  if (waves.empty()) return out;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(waves.size()));
  out.reserve(waves.size());
  for (auto &k : waves) {
    Harmonic hm;
    hm.k = std::move(k);
    hm.cos = scale * normal(rng);
    hm.sin = scale * normal(rng);
    out.push_back(std::move(hm));
  }
  return out;
}

} // namespace chernforge
