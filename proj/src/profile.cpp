#include "orbsmooth/profile.hpp"

#include <algorithm>

#include "orbsmooth/error.hpp"

namespace orbsmooth {

ProfileFunction::ProfileFunction(double a, double b, ValueFn value)
    : a_(a), b_(b), value_(std::move(value)) {
  if (!(a < b)) throw ValidationError("profile domain must satisfy a < b");
}

ProfileFunction::ProfileFunction(double a, double b, JetFn jet, int analytic_order)
    : a_(a), b_(b), jet_(std::move(jet)), order_(std::clamp(analytic_order, 0, 4)) {
  if (!(a < b)) throw ValidationError("profile domain must satisfy a < b");
  value_ = [j = jet_](double x) { return j(x).c[0]; };
}

double ProfileFunction::operator()(double x) const { return value_(x); }

double ProfileFunction::default_step(int k) {
  static constexpr double steps[5] = {0.0, 1e-5, 1e-4, 2e-3, 5e-3};
  return steps[std::clamp(k, 0, 4)];
}

double ProfileFunction::fd_derivative(int k, double x, double h) const {
  if (h <= 0.0) h = default_step(k);
  const auto& f = value_;
  switch (k) {
    case 0:
      return f(x);
    case 1:
      return (f(x + h) - f(x - h)) / (2.0 * h);
    case 2:
      return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) +
              f(x - 2 * h)) /
             (h * h * h * h);
    default:
      throw ValidationError("derivative order must be in 0..4");
  }
}

double ProfileFunction::derivative(int k, double x) const {
  if (k < 0 || k > 4) throw ValidationError("derivative order must be in 0..4");
  if (jet_ && k <= order_) return jet_(x).deriv(k);
  return fd_derivative(k, x);
}

std::array<double, 5> ProfileFunction::derivatives(double x) const {
  std::array<double, 5> d{};
  for (int k = 0; k <= 4; ++k) d[k] = derivative(k, x);
  return d;
}

Jet4 ProfileFunction::jet(double x) const {
  if (jet_) return jet_(x);
  Jet4 j;
  j.c[0] = value_(x);
  j.c[1] = fd_derivative(1, x);
  j.c[2] = 0.5 * fd_derivative(2, x);
  return j;
}

ProfileFunction operator+(const ProfileFunction& f, const ProfileFunction& g) {
  const double a = std::max(f.a_, g.a_), b = std::min(f.b_, g.b_);
  if (f.jet_ && g.jet_) {
    return ProfileFunction(
        a, b, [fj = f.jet_, gj = g.jet_](double x) { return fj(x) + gj(x); },
        std::min(f.order_, g.order_));
  }
  return ProfileFunction(a, b, [fv = f.value_, gv = g.value_](double x) {
    return fv(x) + gv(x);
  });
}

ProfileFunction ProfileFunction::scaled(double s) const {
  if (jet_) {
    return ProfileFunction(a_, b_, [j = jet_, s](double x) { return j(x) * s; },
                           order_);
  }
  return ProfileFunction(a_, b_, [v = value_, s](double x) { return s * v(x); });
}

}  // namespace orbsmooth
