#pragma once

// Cutoff functions with scale-invariant derivative bounds, curvature-controlled
// blending of two metrics near a submanifold N, and the chart-level
// polarization and circle-averaging of metrics around an axis.

#include <functional>
#include <vector>

#include "orbsmooth/chart.hpp"
#include "orbsmooth/hyper.hpp"
#include "orbsmooth/profile.hpp"

namespace orbsmooth {

inline constexpr double kTolMatchClosed = 1e-8;
inline constexpr double kTolMatchSampled = 1e-4;
inline constexpr int kCircleNodes = 512;

// φ_ε(x) = S((ln ε − ln x)/(ln ε − ln δ)), δ = ε·e^{−K/ε}.
// φ_ε = 1 on [0, δ], 0 on [ε, ∞).
struct CutoffFunction {
  double eps = 0.0;
  double K = 0.0;
  double log_delta = 0.0;  // ln δ; δ itself underflows for ε ≲ 6e-3
  double delta = 0.0;      // exp(log_delta), possibly 0
  ProfileFunction phi;     // on [0, ∞), exact jets to order 4

  // Sups over a log-spaced grid of (δ, ε) and their distance to ε.
  double sup_x_d1 = 0.0;   // sup |x φ′|
  double sup_x2_d2 = 0.0;  // sup |x² φ″|
  double margin_d1 = 0.0;
  double margin_d2 = 0.0;
  int grid_points = 0;

  double operator()(double x) const;
  // Taylor coefficients in x; constant outside (δ, ε).
  Jet<2> jet(double x) const;
  // Value and derivatives in x, scaled: (φ, xφ′, x²φ″), valid for any x > 0
  // including x < δ underflow regimes, through ln x.
  std::array<double, 3> scaled_derivatives(double log_x) const;
};

// Smallest K for which the two sup-bounds hold for every ε ≤ 1, computed once
// from the smoothstep derivative sups.
double cutoff_constant();

// Requires ε ∈ (0, 1).
CutoffFunction build_cutoff(double eps, int grid_points = 4096);

using ScalarField = std::function<double(const Vec&)>;
using HyperScalar = std::function<Hyper(const HyperPoint&)>;

struct FirstOrderGap {
  double value = 0.0;       // max |g̃ − g| over the points
  double derivative = 0.0;  // max |∂(g̃ − g)|
  int points = 0;
};

// Gap by central differences with step 1e−5.
FirstOrderGap first_order_gap(const ChartMetric& g, const ChartMetric& g_tilde,
                              const std::vector<Vec>& points);
// Gap from exact derivatives.
FirstOrderGap first_order_gap(const HyperMetric& g, const HyperMetric& g_tilde,
                              const std::vector<Vec>& points);

// h_ε = ψ g̃ + (1 − ψ) g with ψ = φ_ε ∘ dist_to_N. The points must lie on N;
// throws ValidationError if g and g̃ disagree there to first order beyond
// tol_match.
ChartMetric blend_metrics(const ChartMetric& g, const ChartMetric& g_tilde,
                          ScalarField dist_to_N, const CutoffFunction& cutoff,
                          const std::vector<Vec>& axis_points,
                          double tol_match = kTolMatchSampled);
HyperMetric blend_metrics(const HyperMetric& g, const HyperMetric& g_tilde,
                          HyperScalar dist_to_N, const CutoffFunction& cutoff,
                          const std::vector<Vec>& axis_points,
                          double tol_match = kTolMatchClosed);

// The same blend written as h = g + ψ·D with D = g̃ − g supplied directly.
// Subtracting g from g̃ leaves an absolute error near 1e−16, which ψ″ ~ d⁻²
// amplifies; an exact D keeps the curvature accurate down to d ≈ δ.
HyperMetric blend_difference(const HyperMetric& g, HyperMetric::Fn difference,
                             HyperScalar dist_to_N, const CutoffFunction& cutoff,
                             const std::vector<Vec>& axis_points,
                             double tol_match = kTolMatchClosed);

// φ_ε ∘ d on Hyper numbers; exactly 1 for d ≤ δ and 0 for d ≥ ε.
Hyper cutoff_of(const CutoffFunction& cutoff, const Hyper& d);

// Space form of curvature κ in Cartesian normal coordinates about 0:
// g = F δ + G x xᵀ with F = sn_κ(r)²/r², G = (1 − F)/r². For κ > 0 the chart
// is the ball r < π/√κ; `half_width` sets the coordinate box.
HyperMetric space_form_normal(double kappa, double half_width);

// (space form κ₂) − (space form κ₁) in normal coordinates, without cancellation.
HyperMetric::Fn space_form_difference(double kappa1, double kappa2);

// Caps g, given in normal coordinates about 0, with the space form of
// curvature κ on a δ-ball. κ ≥ c is required, c the lower bound of g; the
// chart must contain the ε-ball. Distance to 0 is |x|. model_minus_g, when
// given, is the exact difference (space form κ) − g.
HyperMetric constant_curvature_cap(const HyperMetric& g_normal, double kappa,
                                   double lower_bound, const CutoffFunction& cutoff,
                                   HyperMetric::Fn model_minus_g = nullptr);

// Two curvature-1 metrics on the box [−w, w]³ around the axis N = {x = y = 0}:
// g the round S³ in stereographic coordinates, g̃ its pullback under
// (x, y, z) ↦ (x, y, z + a·c(x, y)). With c = x³ − 3xy² the pair agrees to
// first order on N; with c = x² − y² (shear_degree 2) it does not.
struct AxisPair {
  HyperMetric g, g_tilde;
  HyperMetric::Fn difference;  // g̃ − g in closed form
  HyperScalar dist_to_N;       // round distance to the axis great circle
  std::vector<Vec> axis_points;
  double shear = 0.0;
};

AxisPair stereographic_axis_pair(double shear = 1.0, int shear_degree = 3,
                                 double half_width = 0.6);

// Point of the box at round distance d from N, height z and azimuth ω.
Vec axis_pair_point(double d, double z, double omega);

struct BlendStudy {
  double eps = 0.0;
  double log_delta = 0.0;
  double min_curvature = 0.0;  // exact, over the sweep
  double min_at_distance = 0.0;
  double input_min = 0.0;      // min over g and g̃ at the same points
  int points = 0;
  double fd_max_gap = 0.0;     // |exact − FD oracle| where d ≥ 1e−2
  int fd_points = 0;
};

// Sweeps the blend tube of an axis pair: distances log-spaced from δ/e to
// 1.2ε, four heights, six azimuths.
BlendStudy axis_pair_blend_study(const AxisPair& pair, double eps, int radii = 160);

// Metric on (t, r, θ) coordinates, θ the last coordinate.
// Throws ValidationError if coefficients vary with θ by more than tol.
void require_circle_invariant(const ChartMetric& g, double tol = 1e-10);

// Sets g_{tθ} to 0; g must be circle-invariant.
ChartMetric drop_cross_term(const ChartMetric& g);

// h = (2π)⁻¹ ∫ θ*g dθ by the periodic trapezoid rule. θ must range over a
// full period.
ChartMetric average_circle_action(const ChartMetric& g, int nodes = kCircleNodes);

// Cartesian form (t, x, y) of a metric in (t, r, θ). On the axis the
// coefficients are the mean over four points at r = 1e−9.
ChartMetric polar_to_cartesian(const ChartMetric& polar);

struct AxisAgreement {
  double order = 0.0;     // fitted exponent p in |h − g| ≈ C r^p (Cartesian)
  double gap_small = 0.0; // max Cartesian gap at the smallest radius
  bool second_order = false;  // p ≥ 2.5
};

// Compares g and h near {r = 0} at the given t values, radii r₀·2^{−k}.
AxisAgreement axis_agreement(const ChartMetric& g_polar, const ChartMetric& h_polar,
                             const std::vector<double>& t_values, double r0 = 0.05,
                             int levels = 4);

}  // namespace orbsmooth
