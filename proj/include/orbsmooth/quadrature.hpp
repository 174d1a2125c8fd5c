#pragma once

#include <functional>
#include <vector>

namespace orbsmooth {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// n-point Gauss-Legendre rule (Newton on P_n); cached per n.
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre over [a,b] with equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 8, int order = 8);

// Periodic trapezoid rule over [0, 2π) with n nodes.
double integrate_periodic(const std::function<double(double)>& f, int n = 512);

}  // namespace orbsmooth
