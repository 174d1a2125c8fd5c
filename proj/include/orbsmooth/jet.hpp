#pragma once

// Truncated Taylor series f(x0 + e) = c[0] + c[1] e + ... + c[N] e^N.
// Arithmetic and elementary functions propagate all N+1 coefficients,
// giving exact-to-rounding derivatives of closed-form expressions.

#include <array>
#include <cmath>

namespace orbsmooth {

template <int N>
struct Jet {
  std::array<double, N + 1> c{};

  Jet() = default;
  explicit Jet(double v) { c[0] = v; }

  static Jet variable(double x0) {
    Jet j(x0);
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }

  // k-th derivative at the expansion point.
  double deriv(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int i = 0; i <= N; ++i) r.c[i] = -c[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= N; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N>
Jet<N> operator+(Jet<N> a, double s) { a.c[0] += s; return a; }
template <int N>
Jet<N> operator+(double s, Jet<N> a) { a.c[0] += s; return a; }
template <int N>
Jet<N> operator-(Jet<N> a, double s) { a.c[0] -= s; return a; }
template <int N>
Jet<N> operator-(double s, const Jet<N>& a) { Jet<N> r = -a; r.c[0] += s; return r; }
template <int N>
Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <int N>
Jet<N> operator*(double s, Jet<N> a) { return a *= s; }
template <int N>
Jet<N> operator/(Jet<N> a, double s) { return a *= (1.0 / s); }

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k <= N; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> q;
  for (int k = 0; k <= N; ++k) {
    double s = a.c[k];
    for (int i = 1; i <= k; ++i) s -= b.c[i] * q.c[k - i];
    q.c[k] = s / b.c[0];
  }
  return q;
}

template <int N>
Jet<N> operator/(double s, const Jet<N>& b) { return Jet<N>(s) / b; }

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> e;
  e.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a.c[i] * e.c[k - i];
    e.c[k] = s / k;
  }
  return e;
}

template <int N>
Jet<N> log(const Jet<N>& a) {
  Jet<N> l;
  l.c[0] = std::log(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = k * a.c[k];
    for (int i = 1; i < k; ++i) s -= i * l.c[i] * a.c[k - i];
    l.c[k] = s / (k * a.c[0]);
  }
  return l;
}

template <int N>
void sincos(const Jet<N>& a, Jet<N>& s, Jet<N>& co) {
  s = Jet<N>();
  co = Jet<N>();
  s.c[0] = std::sin(a.c[0]);
  co.c[0] = std::cos(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int i = 1; i <= k; ++i) {
      ss += i * a.c[i] * co.c[k - i];
      cc += i * a.c[i] * s.c[k - i];
    }
    s.c[k] = ss / k;
    co.c[k] = -cc / k;
  }
}

template <int N>
Jet<N> sin(const Jet<N>& a) { Jet<N> s, c; sincos(a, s, c); return s; }
template <int N>
Jet<N> cos(const Jet<N>& a) { Jet<N> s, c; sincos(a, s, c); return c; }

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::sqrt(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = a.c[k];
    for (int i = 1; i < k; ++i) s -= r.c[i] * r.c[k - i];
    r.c[k] = s / (2.0 * r.c[0]);
  }
  return r;
}

template <int N>
Jet<N> pow(const Jet<N>& a, double p) {
  Jet<N> r;
  r.c[0] = std::pow(a.c[0], p);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += (p * i - (k - i)) * a.c[i] * r.c[k - i];
    r.c[k] = s / (k * a.c[0]);
  }
  return r;
}

// d/de of the series; the top coefficient becomes 0.
template <int N>
Jet<N> differentiate(const Jet<N>& a) {
  Jet<N> d;
  for (int k = 0; k < N; ++k) d.c[k] = (k + 1) * a.c[k + 1];
  return d;
}

// Antiderivative with constant term c0; the top input coefficient is dropped.
template <int N>
Jet<N> integrate(const Jet<N>& a, double c0) {
  Jet<N> r(c0);
  for (int k = 1; k <= N; ++k) r.c[k] = a.c[k - 1] / k;
  return r;
}

template <int N>
Jet<N> atan(const Jet<N>& a) {
  return integrate(differentiate(a) / (1.0 + a * a), std::atan(a.c[0]));
}

template <int N>
Jet<N> asin(const Jet<N>& a) {
  return integrate(differentiate(a) / sqrt(1.0 - a * a), std::asin(a.c[0]));
}

// f∘a given f and its derivatives at a.c[0]: derivs[k] = f^(k), k = 0..N.
template <int N>
Jet<N> compose(const std::array<double, N + 1>& derivs, const Jet<N>& a) {
  Jet<N> d = a;
  d.c[0] = 0.0;
  Jet<N> r(derivs[0]);
  Jet<N> p(1.0);
  double fact = 1.0;
  for (int k = 1; k <= N; ++k) {
    p = p * d;
    fact *= k;
    Jet<N> term = p;
    term *= derivs[k] / fact;
    r += term;
  }
  return r;
}

}  // namespace orbsmooth
