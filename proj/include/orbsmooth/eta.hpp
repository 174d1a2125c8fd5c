#pragma once

// The resolving family η_{τ,δ}: a smooth function that equals w·sin θ near
// the tip, is supported in [0, τ], and is δ-small in C² on [τ/3, π/2].

#include <string>
#include <vector>

#include "orbsmooth/profile.hpp"
#include "orbsmooth/quotient.hpp"

namespace orbsmooth {

struct SmoothingParams {
  double tau = 0.3;
  double delta = 1e-2;
  double weight = 0.5;  // 1 − 1/m, or 1 − 2/m for the branched cover
  double tau_of_delta = 0.0;  // filled in by the construction

  // Throws ValidationError unless τ ∈ (0, π/4), δ > 0, w ∈ (0,1).
  void validate() const;
};

struct PropertyCheck {
  std::string name;
  double margin = 0.0;  // positive iff the property holds on its grid
  bool pass = false;
};

struct EtaCertificate {
  std::vector<PropertyCheck> properties;  // (i)..(vi), then 0 ≤ η ≤ δ
  int grid = 4096;
  bool valid = false;
};

// Internals of the construction, reported for reproducibility.
struct EtaConstruction {
  double eps = 0.0;        // shift of the bump profile
  double slope = 0.0;      // slope of the linear ramp below zero
  double lobe = 0.0;       // amplitude of the negative lobe
  double scale = 0.0;      // n: η = H/n away from the tip
  double crossing = 0.0;   // s with w sin s = H(s)/n
  double half_window = 0.0;  // μ
  double centre = 0.0;     // transition centre inside the window
};

struct EtaFunction {
  SmoothingParams params;
  ProfileFunction eta;  // on [0, π/2]; analytic derivatives to order 2
  EtaCertificate certificate;
  EtaConstruction construction;
};

// Deterministic construction; throws WitnessNotFound if the result fails
// verification.
EtaFunction build_eta(SmoothingParams params);

// The identically zero family (w = 0) for tips that are already smooth.
EtaFunction trivial_eta(double tau);

// Per-property margins on 4096-point grids over each property's interval.
EtaCertificate verify_eta(const EtaFunction& eta, int grid = 4096);

// R + η; the weight of η must equal the resolving weight of R.
ProfileFunction resolved_profile(const WeightedQuotientProfile& R, const EtaFunction& eta);

struct TipReport {
  double value = 0.0;
  double slope = 0.0;
  double second = 0.0;  // symmetric second difference at 0
  double fourth = 0.0;  // symmetric fourth difference at 0
  double step = 0.0;
};

// Smoothness criterion for a rotationally symmetric tip: value 0, slope 1,
// vanishing even derivatives. Stencils reach to −2·step.
TipReport tip_check(const ProfileFunction& f, double step);

struct SweepResult {
  double min_curvature = 0.0;
  double argmin = 0.0;
};

// min of −f''/f over (0, π/2), on a uniform grid plus a refined grid on (0, τ].
SweepResult resolved_curvature_sweep(const ProfileFunction& resolved, double tau,
                                     int grid = 4096);

struct LadderAttempt {
  double delta = 0.0;
  bool built = false;
  std::string failure;
  SweepResult sweep;
};

struct LadderResult {
  std::vector<LadderAttempt> attempts;
  bool found = false;
  double delta = 0.0;
  EtaFunction eta;
  ProfileFunction resolved;
  SweepResult sweep;
};

// First δ of a descending ladder whose resolved curvature minimum is ≥ threshold.
LadderResult find_delta_witness(const WeightedQuotientProfile& R, double tau,
                                const std::vector<double>& ladder, double threshold);

}  // namespace orbsmooth
