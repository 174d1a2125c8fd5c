#include "orbsmooth/smoothstep.hpp"

#include <algorithm>
#include <cmath>

namespace orbsmooth {

double flat_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = flat_exp(x), b = flat_exp(1.0 - x);
  return a / (a + b);
}

double bump01(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return flat_exp(x) * flat_exp(1.0 - x);
}

namespace {
struct StepBounds {
  double d1 = 0.0, d2 = 0.0;
  StepBounds() {
    const int n = 20000;
    for (int i = 1; i < n; ++i) {
      auto j = smoothstep(Jet<2>::variable(double(i) / n));
      d1 = std::max(d1, std::abs(j.deriv(1)));
      d2 = std::max(d2, std::abs(j.deriv(2)));
    }
    // grid sup undershoots the true sup by O(1/n^2); pad generously
    d1 *= 1.001;
    d2 *= 1.001;
  }
};
const StepBounds& step_bounds() {
  static const StepBounds b;
  return b;
}
}  // namespace

double smoothstep_max_d1() { return step_bounds().d1; }
double smoothstep_max_d2() { return step_bounds().d2; }

}  // namespace orbsmooth
