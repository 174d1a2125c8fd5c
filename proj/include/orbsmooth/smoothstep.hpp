#pragma once

// C-infinity transition functions built from e^{-1/x}.

#include "orbsmooth/jet.hpp"

namespace orbsmooth {

// e^{-1/x} for x > 0, 0 otherwise.
double flat_exp(double x);

// Smoothstep: 0 for x <= 0, 1 for x >= 1, C-infinity, S(1-x) = 1 - S(x).
double smoothstep(double x);

// Sup of |S'| and |S''| over [0,1], computed once on a fine grid.
double smoothstep_max_d1();
double smoothstep_max_d2();

// Bump supported in (0,1): flat_exp(x) * flat_exp(1-x), peak e^{-4} at 1/2.
double bump01(double x);

template <int N>
Jet<N> flat_exp(const Jet<N>& x) {
  if (x.c[0] <= 1.0 / 700.0) return Jet<N>();
  return exp(-1.0 / x);
}

template <int N>
Jet<N> smoothstep(const Jet<N>& x) {
  if (x.c[0] <= 0.0) return Jet<N>();
  if (x.c[0] >= 1.0) return Jet<N>(1.0);
  Jet<N> a = flat_exp(x);
  Jet<N> b = flat_exp(1.0 - x);
  return a / (a + b);
}

template <int N>
Jet<N> bump01(const Jet<N>& x) {
  if (x.c[0] <= 0.0 || x.c[0] >= 1.0) return Jet<N>();
  return flat_exp(x) * flat_exp(1.0 - x);
}

}  // namespace orbsmooth
