#pragma once

// Geometry of the tube around a singular geodesic and the extension of the
// resolving field along it.
//
// Section coordinates (s,t): s runs along the geodesic, t is the distance to
// it; on the constant-curvature-1 part the section metric is cos²t ds² + dt²
// and the ball coordinates (r,θ) around the endpoint s = 0 satisfy
//   cos r = cos s cos t,  sin t = sin r sin θ,
//   cos θ = cos t sin s / sin r.

#include <cstdint>
#include <functional>
#include <vector>

#include "orbsmooth/chart.hpp"
#include "orbsmooth/eta.hpp"
#include "orbsmooth/profile.hpp"

namespace orbsmooth {

struct Transfer {
  double r = 0.0, theta = 0.0;
  double dr_ds = 0.0, dr_dt = 0.0;
  double dtheta_ds = 0.0, dtheta_dt = 0.0;
};

// (s,t) ↦ (r,θ) with Jacobian. s ∈ (0,π), t ∈ [0,π/2); s = t = 0 is rejected.
Transfer coordinate_transfer(double s, double t);

// Largest residual of the three relations at (s,t).
double transfer_residual(double s, double t);

struct MonotonicityReport {
  int points = 0;
  // Violations of ∂_s sin r > 0, ∂_t sin r > 0, ∂_tθ > 0, ∂_sθ < 0.
  int violations[4] = {0, 0, 0, 0};
  double min_margin[4] = {0, 0, 0, 0};  // smallest signed value, sign-corrected
  double spot_error = 0.0;  // Jacobian vs central differences at a random point
  bool pass = false;
};

// Interior n×n grid on (0,ρ)×(0,T).
MonotonicityReport monotonicity_check(double rho, double T, int n = 256,
                                      std::uint64_t seed = 7);

// Scalar field on the section with partial jets in s and in t.
// Without jet callbacks, orders 1 and 2 come from central differences.
class SectionField {
 public:
  using Value = std::function<double(double, double)>;
  using PartialJet = std::function<Jet4(double, double)>;

  SectionField() = default;
  explicit SectionField(Value v);
  SectionField(Value v, PartialJet ds, PartialJet dt);

  double operator()(double s, double t) const { return value_(s, t); }
  Jet4 s_jet(double s, double t) const;
  Jet4 t_jet(double s, double t) const;
  bool has_jets() const { return static_cast<bool>(ds_); }

  friend SectionField operator+(const SectionField& a, const SectionField& b);
  // (s,t) ↦ field(l − s, t).
  SectionField reflected(double l) const;

 private:
  Value value_;
  PartialJet ds_, dt_;
};

// (s,t) ↦ sin r · base(θ), the Killing length of the suspension over the
// surface dθ² + base² dα². Partial jets are exact up to base.analytic_order().
SectionField suspended_field(const ProfileFunction& base);

// sin r · base(θ) in ball coordinates.
double killing_polar(const ProfileFunction& base, double r, double theta);

// h(s,t) = sin r · η(θ) on the ball of radius ρ.
SectionField killing_extension(const EtaFunction& eta, double rho);

// h̄(s,t) = h(ρ/2, t), constant in s.
SectionField hbar_extension(const EtaFunction& eta, double rho);

// t at which θ(s, t) reaches the angle θ₀.
double t_at_angle(double s, double theta0);

struct TubeChart {
  double length = 0.0;  // l
  double radius = 0.0;  // T
  double rho = 0.0;
  int axis_weight = 1;  // m along the geodesic
  SectionField f;       // warp of ds²
  SectionField phi;     // Killing length
};

// Tube around the singular axis of the suspension over a weighted quotient
// profile: l = π, f = cos t, φ = sin r · R(θ). Requires (ρ/2, t) inside the
// ρ-ball for t < T.
TubeChart suspension_tube(const ProfileFunction& R, int axis_weight, double rho,
                          double T);

// Throws ValidationError unless f(s,0) = 1, φ(s,0) = 0, ∂_tφ(s,0) = 1/m.
void validate_tube(const TubeChart& tube);

// f² ds² + dt² on (0,l)×(0,T).
ChartMetric section_metric(const TubeChart& tube);

// f² ds² + dt² + (φ + h̄)² dα², coordinates (s, t, α).
ChartMetric tube_metric(const TubeChart& tube, const SectionField& hbar);

// Orthonormal frame {(φ+h̄)⁻¹∂α, ∂t, f⁻¹∂s} as columns in (s,t,α) coordinates.
Mat tube_frame(const TubeChart& tube, const SectionField& hbar, double s, double t);

// diag(f ∂_t h̄ ∂_t f, ∂²_t h̄) in (s,t) order, for h̄ constant in s.
Mat hbar_hessian_formula(const TubeChart& tube, const SectionField& hbar, double s,
                         double t);

// Block form of the curvature operator in tube_frame: upper 2×2 block
// −ψ⁻¹∇²ψ in (∂t, f⁻¹∂s), lower entry the section curvature.
Eigen::Matrix3d block_curvature_operator(const TubeChart& tube,
                                         const SectionField& hbar, double s,
                                         double t);

struct AxisRegularity {
  double s = 0.0;
  double xi[5] = {0, 0, 0, 0, 0};  // Taylor coefficients of ξ = (φ+h̄)² at t = 0
  double zeta0 = 0.0;              // ζ(s,0) = ξ coefficient of t⁴
  double zeta_max = 0.0;           // max |ζ| over the sampled t
  double odd_first = 0.0;          // symmetric-difference ∂_tζ(s,0)
  double odd_third = 0.0;          // symmetric-difference ∂³_tζ(s,0)
  bool finite = false;
};

// ζ = (ξ/t² − 1)/t².
double zeta(const TubeChart& tube, const SectionField& hbar, double s, double t);

// Smoothness surrogate at t = 0. Stencils use the odd continuation in t of
// φ + h̄, valid for |t| up to the radius where h̄ = w sin t.
AxisRegularity axis_regularity(const TubeChart& tube, const SectionField& hbar,
                               double s, double step = 2e-3);

struct ThresholdCheck {
  double T0 = 0.0;
  double max_ratio = 0.0;     // max of f⁻¹∂_t f / φ over [ρ/4, l−ρ/4]×(0,T0]
  double support = 0.0;       // t beyond which h̄ vanishes
  double half_angle_t = 0.0;  // t with θ(ρ/2,t) = τ/2
  bool sign_ok = false;
  bool support_ok = false;
};

ThresholdCheck tube_threshold_check(const TubeChart& tube, double tau, double T0,
                                    int n = 128);

struct TubeSweep {
  double min_curvature = 0.0;
  double at_s = 0.0, at_t = 0.0;
  int points = 0;
};

// Smallest eigenvalue of the oracle curvature operator over an interior grid
// of [ρ/4, l − ρ/4] × (0, T).
TubeSweep tube_curvature_sweep(const TubeChart& tube, const SectionField& hbar,
                               int ns = 24, int nt = 24);

// Piecewise profile: φ + h for s ≤ ρ/2, φ + h̄ in the middle, φ + h̃ near l.
class MinGlue {
 public:
  MinGlue(SectionField phi, SectionField h, SectionField hbar, SectionField htilde,
          double rho, double l);

  double operator()(double s, double t) const;
  double rho() const { return rho_; }
  double length() const { return l_; }
  const SectionField& phi() const { return phi_; }
  const SectionField& h() const { return h_; }
  const SectionField& hbar() const { return hbar_; }
  const SectionField& htilde() const { return htilde_; }

  // Largest mismatch of the pieces along both seams over t ∈ [0, T].
  double seam_mismatch(double T, int n = 512) const;

 private:
  SectionField phi_, h_, hbar_, htilde_;
  double rho_ = 0.0, l_ = 0.0;
};

// Throws ValidationError if the seams disagree by more than 1e−12.
MinGlue psi_min_glue(const SectionField& phi, const SectionField& h,
                     const SectionField& hbar, const SectionField& htilde,
                     double rho, double l, double T);

struct SeamScan {
  double max_jump = 0.0;  // max |∂_s jump| across s = ρ/2
  double t_lo = 0.0, t_hi = 0.0;          // t-range with a jump above threshold
  double theta_lo = 0.0, theta_hi = 0.0;  // the same range as angles
  int jumps = 0;
};

// Derivative jumps of ψ across the seam s = ρ/2 on a t-grid of (0,T).
SeamScan seam_jump_scan(const MinGlue& psi, double T, int n = 1024,
                        double threshold = 1e-9);

// Unit-sphere model of the section: (s,t) ↦ (cos t cos s, cos t sin s, sin t).
Eigen::Vector3d section_embed(double s, double t);
void section_chart(const Eigen::Vector3d& x, double& s, double& t);

struct ConcavityReport {
  int trials = 0;
  double worst = 0.0;  // min of f(mid) − (f(a)+f(b))/2
  bool pass = false;
};

// Geodesic midpoint tests on the ball of radius ρ about s = t = 0, t ≥ 0.
ConcavityReport midpoint_concavity(const std::function<double(double, double)>& f,
                                   double rho, int trials, std::uint64_t seed,
                                   double tol = 1e-12);

}  // namespace orbsmooth
