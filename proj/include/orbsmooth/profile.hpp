#pragma once

#include <array>
#include <functional>

#include "orbsmooth/jet.hpp"

namespace orbsmooth {

using Jet4 = Jet<4>;

// One-variable function on [a,b] with derivatives to order 4.
// Orders up to analytic_order() come from the jet callback; higher
// orders (or all, when no jet is supplied) use central differences.
// The callbacks may be evaluated slightly outside [a,b] by stencils.
class ProfileFunction {
 public:
  using ValueFn = std::function<double(double)>;
  using JetFn = std::function<Jet4(double)>;

  ProfileFunction() = default;
  ProfileFunction(double a, double b, ValueFn value);
  ProfileFunction(double a, double b, JetFn jet, int analytic_order);

  double lower() const { return a_; }
  double upper() const { return b_; }
  int analytic_order() const { return order_; }
  bool has_jet() const { return static_cast<bool>(jet_); }

  double operator()(double x) const;
  double derivative(int k, double x) const;
  std::array<double, 5> derivatives(double x) const;

  // Always finite differences, step h (or the per-order default).
  double fd_derivative(int k, double x, double h = 0.0) const;
  static double default_step(int k);

  // Taylor coefficients at x. Only orders ≤ max(analytic_order(), 2) are
  // meaningful; without a jet callback orders 1 and 2 come from differences.
  Jet4 jet(double x) const;

  friend ProfileFunction operator+(const ProfileFunction& f,
                                   const ProfileFunction& g);
  ProfileFunction scaled(double s) const;

 private:
  double a_ = 0.0, b_ = 0.0;
  ValueFn value_;
  JetFn jet_;
  int order_ = 0;
};

}  // namespace orbsmooth
