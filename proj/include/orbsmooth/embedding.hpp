#pragma once

// Isometric embedding of rotationally symmetric spheres of curvature ≥ 1 into
// the round S³ as surfaces of revolution, the central projection to flat
// space, and mollification of the resulting convex cones.
//
// S³ ⊂ R⁴ in coordinates (s, t, θ):
//   (cos t cos s, cos t sin s, sin t cos θ, sin t sin θ),
// metric cos²t ds² + dt² + sin²t dθ². The surface is (r, θ) ↦ (v(r), asin R(r), θ).

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "orbsmooth/profile.hpp"

namespace orbsmooth {

// dr² + R(r)² dθ² on [0, d] × [0, 2π).
struct RevolutionMetric {
  double d = 0.0;
  ProfileFunction R;
  std::string label;
};

struct RevolutionReport {
  double min_curvature = 0.0;  // min of −R″/R on the interior grid
  double max_energy = 0.0;     // max of R′² + R²
  double sup_R = 0.0;
  double tip_slope0 = 0.0, tip_slope1 = 0.0;  // R′(0), −R′(d)
  bool curvature_ok = false;   // min ≥ 1 − 1e−8
  bool energy_ok = false;      // max ≤ 1 + 1e−10
};

RevolutionReport inspect_revolution(const RevolutionMetric& g, int grid = 4096);

// Constant curvature κ ≥ 1: R = sin(√κ r)/√κ, d = π/√κ.
RevolutionMetric space_form_sphere(double kappa);
// Spindle dr² + k⁻² sin²r dθ², tips of cone angle 2π/k, d = π.
RevolutionMetric spindle(int k);

struct EmbeddingCurve {
  double d = 0.0;
  double step = 0.0;
  std::vector<double> r, v;  // RK4 nodes, v(0) = 0
  std::vector<double> dv;    // integrand at the nodes
  int clamped = 0;           // radicand evaluations clamped to 0

  // Piecewise cubic Hermite interpolation of the nodes.
  double value(double x) const;
  // Fourth-order differences of the nodes (one-sided near the ends).
  double slope_at_node(int i) const;
};

// 1 − R² − R′² at r, the ODE radicand.
double embedding_radicand(const RevolutionMetric& g, double r);

// v′ = √(1 − R² − R′²)/(1 − R²), v(0) = 0, classical RK4 with a fixed step
// (the largest step ≤ `step` dividing d). Throws ValidationError when
// sup R ≥ 1 (the rigid round case) or when the radicand is below −1e−12.
EmbeddingCurve solve_embedding_ode(const RevolutionMetric& g, double step = 1e-4);

// sup over nodes of |v′²(1 − R²) + R′²/(1 − R²) − 1| with v′ from the nodes.
double pullback_check(const RevolutionMetric& g, const EmbeddingCurve& curve);

// Same curve with v scaled by `factor`.
EmbeddingCurve scaled_curve(const EmbeddingCurve& curve, double factor);

// Point of the embedded surface in R⁴.
Eigen::Vector4d surface_point(const RevolutionMetric& g, const EmbeddingCurve& curve,
                              double r, double theta);

struct ImmersionReport {
  double min_singular = 0.0;  // smallest singular value of du over the grid
  int points = 0;
  bool immersed = false;
};

// Rank of du = [∂_r u, ∂_θ u] on an interior grid.
ImmersionReport immersion_check(const RevolutionMetric& g, const EmbeddingCurve& curve,
                                int n = 256);

// Central projection of the open hemisphere about the unit vector c onto the
// affine tangent plane {⟨x, c⟩ = 1}: q ↦ q/⟨q, c⟩.
Eigen::VectorXd beltrami(const Eigen::VectorXd& c, const Eigen::VectorXd& q);
// x ↦ x/|x| for x on the tangent plane.
Eigen::VectorXd beltrami_inverse(const Eigen::VectorXd& c, const Eigen::VectorXd& x);

// Radial function F(|x|) on R³.
using RadialProfile = std::function<double(double)>;

struct MollifyOptions {
  int radial_nodes = 48;  // Gauss-Legendre on [0, 1/n]
  int chord_nodes = 48;   // Gauss-Legendre across the shell
};

// f ∗ σ_n for a radial f with an O(3)-invariant mollifier supported in
// B_{1/n}. Evaluates F only at nonnegative arguments.
RadialProfile radial_mollify(const RadialProfile& F, int n, MollifyOptions options = {});

// j_r(|x|) f_n + (1 − j_r(|x|)) f with j_r = 1 on [0, r/2], 0 on [r, ∞).
// Throws ValidationError if F is not convex with F′(0+) ≥ 0 on a grid of [0, 2r].
RadialProfile convex_mollify(const RadialProfile& F, int n, double r,
                             MollifyOptions options = {});

struct ConvexityCheck {
  int trials = 0;
  double worst = 0.0;  // max of f(mid) − (f(a) + f(b))/2
  bool pass = false;
};

// Midpoint test on random segments of R³ that avoid the shell r/2 < |x| < r.
ConvexityCheck radial_midpoint_convexity(const RadialProfile& F, double r, double extent,
                                         int trials, unsigned seed, double tol = 1e-12);

// Tangent cone of the suspension point over an embedded sphere, as the graph
// of f over the hyperplane orthogonal to the centre c of the arc v ∈ [0, v(d)]:
// coordinates (x₁ in the (s)-plane, x₂, x₃ in the θ-plane).
struct ConeGraph {
  bool flat = false;  // round tip: f ≡ 0
  Eigen::Vector4d centre = Eigen::Vector4d::Zero();
  double slope_min = 0.0, slope_max = 0.0;  // f on the unit sphere of R³
  std::function<double(const Eigen::Vector3d&)> f;

  bool radial(double tol = 1e-6) const { return slope_max - slope_min <= tol; }
};

// Round tip (sup R = 1 with d = π) gives the flat graph; otherwise the
// embedding is solved with the given step. Requires v(d) < π for a graph
// over the whole hyperplane; v(d) = π (antipodal tips) gives slope 0 along x₁.
ConeGraph cone_from_tip(const RevolutionMetric& g, double step = 1e-4);

}  // namespace orbsmooth
