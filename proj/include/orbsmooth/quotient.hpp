#pragma once

// Closed-form model geometries: the weighted circle quotients of S³,
// Z_k spaces of directions, cones and spherical suspensions.

#include <functional>

#include "orbsmooth/chart.hpp"
#include "orbsmooth/profile.hpp"

namespace orbsmooth {

// Throws ValidationError unless m_minus, m_plus ≥ 1 and coprime.
void validate_weights(int m_minus, int m_plus);

// R(θ) = sinθ cosθ / sqrt(m₊² sin²θ + m₋² cos²θ); odd in θ.
double quotient_profile(int m_minus, int m_plus, double theta);
Jet4 quotient_profile_jet(int m_minus, int m_plus, double theta);

// 1 + 3 m₋² m₊² / (m₋² cos²θ + m₊² sin²θ)², θ in the open interval.
double quotient_curvature(int m_minus, int m_plus, double theta);
// Same closed form, endpoints allowed.
double quotient_curvature_closed(int m_minus, int m_plus, double theta);

struct WeightedQuotientProfile {
  int m_minus = 1, m_plus = 1;
  // 1 for the quotient itself, 2 for the twofold branched cover along the
  // θ = 0 edge (angle doubled, profile 2R, tip slope 2/m₋).
  int sheets = 1;
  ProfileFunction R;

  double tip_slope() const { return double(sheets) / m_minus; }
  // Weight of the resolving family: 1 − tip slope.
  double resolving_weight() const { return 1.0 - tip_slope(); }
};

WeightedQuotientProfile make_quotient_profile(int m_minus, int m_plus, int sheets = 1);

struct CurvatureGap {
  double gap = 0.0;     // min(K) − 1 over the grid
  double argmin = 0.0;
};

// Grid minimization over n interior points of (0, π/2).
CurvatureGap curvature_gap(int m_minus, int m_plus, int n = 2048);

// dr² + k⁻² sin²r dθ² on (0,π) × (0,2π).
ChartMetric zk_directions_metric(int k);

// Distance in the spherical suspension / Euclidean cone over a base space.
double suspension_distance(double d_base, double t, double s);
double cone_distance(double d_base, double t, double s);

class SuspensionSpace {
 public:
  enum class Kind { cone, suspension };
  using BaseDistance = std::function<double(double, double)>;

  // Base points are parametrized by a real label x; diameter ≤ π required.
  SuspensionSpace(Kind kind, BaseDistance base, double base_diameter);

  Kind kind() const { return kind_; }
  double distance(double x, double t, double y, double s) const;

 private:
  Kind kind_;
  BaseDistance base_;
  double diam_;
};

// dr² + sin²r (dθ² + R(θ)² dα²) on (0,ρ) × (0,π/2) × (0,2π).
ChartMetric ball_suspension_metric(const ProfileFunction& R, double rho);

}  // namespace orbsmooth
