#pragma once

// Second-order forward differentiation in three variables: value, gradient
// and Hessian propagate through arithmetic and elementary functions.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>

#include "orbsmooth/chart.hpp"
#include "orbsmooth/jet.hpp"

namespace orbsmooth {

struct Hyper {
  double v = 0.0;
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();

  Hyper() = default;
  Hyper(double x) : v(x) {}  // NOLINT: constants promote implicitly

  static Hyper variable(double x, int i) {
    Hyper h(x);
    h.d(i) = 1.0;
    return h;
  }

  // f∘u given f, f′, f″ at u.v.
  static Hyper chain(const Hyper& u, double f0, double f1, double f2) {
    Hyper r(f0);
    r.d = f1 * u.d;
    r.H = f2 * u.d * u.d.transpose() + f1 * u.H;
    return r;
  }
  // f∘u with the derivatives of f read off a second-order jet at u.v.
  static Hyper chain(const Hyper& u, const Jet<2>& f) {
    return chain(u, f.c[0], f.c[1], 2.0 * f.c[2]);
  }
};

inline Hyper operator+(const Hyper& a, const Hyper& b) {
  Hyper r;
  r.v = a.v + b.v;
  r.d = a.d + b.d;
  r.H = a.H + b.H;
  return r;
}
inline Hyper operator-(const Hyper& a, const Hyper& b) {
  Hyper r;
  r.v = a.v - b.v;
  r.d = a.d - b.d;
  r.H = a.H - b.H;
  return r;
}
inline Hyper operator-(const Hyper& a) { return Hyper(0.0) - a; }
inline Hyper operator*(const Hyper& a, const Hyper& b) {
  Hyper r;
  r.v = a.v * b.v;
  r.d = a.v * b.d + b.v * a.d;
  r.H = a.v * b.H + b.v * a.H + a.d * b.d.transpose() + b.d * a.d.transpose();
  return r;
}
inline Hyper operator/(const Hyper& a, const Hyper& b) {
  const double iv = 1.0 / b.v;
  return a * Hyper::chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Hyper sqrt(const Hyper& u) {
  const double s = std::sqrt(u.v);
  return Hyper::chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}
inline Hyper exp(const Hyper& u) {
  const double e = std::exp(u.v);
  return Hyper::chain(u, e, e, e);
}
inline Hyper log(const Hyper& u) {
  return Hyper::chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}
inline Hyper sin(const Hyper& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return Hyper::chain(u, s, c, -s);
}
inline Hyper cos(const Hyper& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return Hyper::chain(u, c, -s, -c);
}
inline Hyper asin(const Hyper& u) {
  const double q = 1.0 - u.v * u.v;
  const double r = 1.0 / std::sqrt(q);
  return Hyper::chain(u, std::asin(u.v), r, u.v * r / q);
}

using HyperPoint = std::array<Hyper, 3>;
using HyperMat = std::array<std::array<Hyper, 3>, 3>;

// A 3-dim metric whose coefficients can be evaluated on Hyper numbers, giving
// exact first and second coefficient derivatives at any point.
class HyperMetric {
 public:
  using Fn = std::function<HyperMat(const HyperPoint&)>;

  HyperMetric() = default;
  HyperMetric(std::vector<CoordRange> coords, Fn fn)
      : coords_(std::move(coords)), fn_(std::move(fn)) {}

  const std::vector<CoordRange>& coords() const { return coords_; }
  HyperMat operator()(const HyperPoint& x) const { return fn_(x); }
  const Fn& fn() const { return fn_; }

  Mat value(const Vec& p) const;
  MetricDerivatives derivatives(const Vec& p) const;
  // Value-only chart, for the finite-difference oracle.
  ChartMetric chart(double h_fd = 1e-4) const;

 private:
  std::vector<CoordRange> coords_;
  Fn fn_;
};

// Curvature from exact coefficient derivatives.
Tensor4 riemann_exact(const HyperMetric& g, const Vec& p);
double min_sectional_exact(const HyperMetric& g, const Vec& p);

}  // namespace orbsmooth
