#include "orbsmooth/quotient.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "orbsmooth/error.hpp"

namespace orbsmooth {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;

template <int N>
Jet<N> profile_expr(int mm, int mp, const Jet<N>& th) {
  Jet<N> s, c;
  sincos(th, s, c);
  const double a = double(mp) * mp, b = double(mm) * mm;
  return s * c / sqrt(a * s * s + b * c * c);
}
}  // namespace

void validate_weights(int m_minus, int m_plus) {
  if (m_minus < 1 || m_plus < 1) {
    throw ValidationError("weights must be positive integers");
  }
  if (std::gcd(m_minus, m_plus) != 1) {
    throw ValidationError("weights " + std::to_string(m_minus) + "," + std::to_string(m_plus) +
                          " are not coprime: the circle action is not effective");
  }
}

double quotient_profile(int m_minus, int m_plus, double theta) {
  validate_weights(m_minus, m_plus);
  const double s = std::sin(theta), c = std::cos(theta);
  const double a = double(m_plus) * m_plus, b = double(m_minus) * m_minus;
  if (theta == 0.0 || theta == kHalfPi) return 0.0;
  return s * c / std::sqrt(a * s * s + b * c * c);
}

Jet4 quotient_profile_jet(int m_minus, int m_plus, double theta) {
  Jet4 r = profile_expr(m_minus, m_plus, Jet4::variable(theta));
  if (theta == 0.0 || theta == kHalfPi) r.c[0] = 0.0;
  return r;
}

double quotient_curvature_closed(int m_minus, int m_plus, double theta) {
  validate_weights(m_minus, m_plus);
  const double s = std::sin(theta), c = std::cos(theta);
  const double a = double(m_plus) * m_plus, b = double(m_minus) * m_minus;
  const double q = b * c * c + a * s * s;
  return 1.0 + 3.0 * a * b / (q * q);
}

double quotient_curvature(int m_minus, int m_plus, double theta) {
  if (!(theta > 0.0 && theta < kHalfPi)) {
    throw DomainError("quotient curvature ratio is 0/0 at the endpoints; θ must be in (0, π/2)");
  }
  return quotient_curvature_closed(m_minus, m_plus, theta);
}

WeightedQuotientProfile make_quotient_profile(int m_minus, int m_plus, int sheets) {
  validate_weights(m_minus, m_plus);
  if (sheets != 1 && sheets != 2) throw ValidationError("sheets must be 1 or 2");
  if (sheets == 2 && m_minus < 3) {
    throw ValidationError("branched-cover weight 1 - 2/m needs m >= 3");
  }
  WeightedQuotientProfile p;
  p.m_minus = m_minus;
  p.m_plus = m_plus;
  p.sheets = sheets;
  p.R = ProfileFunction(
      0.0, kHalfPi,
      [m_minus, m_plus, sheets](double th) {
        return quotient_profile_jet(m_minus, m_plus, th) * double(sheets);
      },
      4);
  return p;
}

CurvatureGap curvature_gap(int m_minus, int m_plus, int n) {
  validate_weights(m_minus, m_plus);
  CurvatureGap g;
  g.gap = INFINITY;
  for (int i = 1; i <= n; ++i) {
    const double th = kHalfPi * i / (n + 1);
    const double k = quotient_curvature(m_minus, m_plus, th) - 1.0;
    if (k < g.gap) {
      g.gap = k;
      g.argmin = th;
    }
  }
  return g;
}

ChartMetric zk_directions_metric(int k) {
  if (k <= 0) throw ValidationError("Z_k order must be positive");
  return ChartMetric({{"r", 0.0, std::numbers::pi}, {"theta", 0.0, 2.0 * std::numbers::pi}},
                     [k](const Vec& p) {
                       Mat g = Mat::Zero(2, 2);
                       const double w = std::sin(p(0)) / k;
                       g(0, 0) = 1.0;
                       g(1, 1) = w * w;
                       return g;
                     });
}

double suspension_distance(double d_base, double t, double s) {
  if (d_base < 0.0 || d_base > std::numbers::pi + 1e-12) {
    throw ValidationError("base distance must lie in [0, π]");
  }
  if (t < 0.0 || s < 0.0 || t > std::numbers::pi || s > std::numbers::pi) {
    throw ValidationError("suspension heights must lie in [0, π]");
  }
  const double c = std::cos(t) * std::cos(s) + std::sin(t) * std::sin(s) * std::cos(d_base);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double cone_distance(double d_base, double t, double s) {
  if (d_base < 0.0 || d_base > std::numbers::pi + 1e-12) {
    throw ValidationError("base distance must lie in [0, π]");
  }
  if (t < 0.0 || s < 0.0) throw ValidationError("cone radii must be nonnegative");
  const double q = t * t + s * s - 2.0 * t * s * std::cos(d_base);
  return std::sqrt(std::max(q, 0.0));
}

SuspensionSpace::SuspensionSpace(Kind kind, BaseDistance base, double base_diameter)
    : kind_(kind), base_(std::move(base)), diam_(base_diameter) {
  if (!(diam_ <= std::numbers::pi + 1e-12)) {
    throw ValidationError("base diameter exceeds π");
  }
}

double SuspensionSpace::distance(double x, double t, double y, double s) const {
  const double d = std::min(base_(x, y), std::numbers::pi);
  return kind_ == Kind::cone ? cone_distance(d, t, s) : suspension_distance(d, t, s);
}

ChartMetric ball_suspension_metric(const ProfileFunction& R, double rho) {
  if (!(rho > 0.0 && rho < kHalfPi)) throw ValidationError("ρ must lie in (0, π/2)");
  return ChartMetric({{"r", 0.0, rho}, {"theta", 0.0, kHalfPi}, {"alpha", 0.0, 2.0 * std::numbers::pi}},
                     [R](const Vec& p) {
                       Mat g = Mat::Zero(3, 3);
                       const double sr = std::sin(p(0));
                       const double w = R(p(1));
                       g(0, 0) = 1.0;
                       g(1, 1) = sr * sr;
                       g(2, 2) = sr * sr * w * w;
                       return g;
                     });
}

}  // namespace orbsmooth
