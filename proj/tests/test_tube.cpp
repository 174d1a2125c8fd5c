#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orbsmooth/error.hpp"
#include "orbsmooth/eta.hpp"
#include "orbsmooth/quotient.hpp"
#include "orbsmooth/tube.hpp"

using namespace orbsmooth;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRho = 1.0, kT = 0.5;

struct Setup {
  WeightedQuotientProfile q;
  EtaFunction eta;
  TubeChart tube;
  SectionField h, hbar;
};

Setup make_setup(int mm, int mp, double tau = 0.3, double delta = 1e-2) {
  Setup s;
  s.q = make_quotient_profile(mm, mp);
  s.eta = mm == 1 ? trivial_eta(tau) : build_eta({tau, delta, s.q.resolving_weight(), 0.0});
  s.tube = suspension_tube(s.q.R, mm, kRho, kT);
  s.h = killing_extension(s.eta, kRho);
  s.hbar = hbar_extension(s.eta, kRho);
  return s;
}

}  // namespace

TEST_CASE("coordinate transfer") {
  for (double s : {0.2, 0.9, 1.4}) {
    const Transfer x = coordinate_transfer(s, 0.0);
    CHECK(x.r == Approx(s).epsilon(1e-15));
    CHECK(x.theta == 0.0);
    CHECK(x.dtheta_dt == Approx(1.0 / std::sin(s)).epsilon(1e-14));
  }
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> us(0.01, 1.5), ut(0.0, 1.2);
  for (int i = 0; i < 1000; ++i) {
    const double s = us(rng), t = ut(rng);
    CHECK(transfer_residual(s, t) <= 1e-12);
    const Transfer x = coordinate_transfer(s, t);
    CHECK(x.dtheta_dt == Approx(std::sin(s) / std::pow(std::sin(x.r), 2)).epsilon(1e-12));
  }
  // Jacobian against differences
  const double s = 0.7, t = 0.4, h = 1e-6;
  const Transfer x = coordinate_transfer(s, t);
  const Transfer a = coordinate_transfer(s + h, t), b = coordinate_transfer(s - h, t);
  const Transfer c = coordinate_transfer(s, t + h), d = coordinate_transfer(s, t - h);
  CHECK(x.dr_ds == Approx((a.r - b.r) / (2 * h)).epsilon(1e-8));
  CHECK(x.dtheta_ds == Approx((a.theta - b.theta) / (2 * h)).epsilon(1e-8));
  CHECK(x.dr_dt == Approx((c.r - d.r) / (2 * h)).epsilon(1e-8));
  CHECK(x.dtheta_dt == Approx((c.theta - d.theta) / (2 * h)).epsilon(1e-8));
  CHECK_THROWS_AS(coordinate_transfer(0.0, 0.0), DomainError);
}

TEST_CASE("monotonicity of the transfer") {
  const MonotonicityReport m = monotonicity_check(kRho, kT, 256);
  CHECK(m.pass);
  CHECK(m.points == 256 * 256);
  for (int k = 0; k < 4; ++k) CHECK(m.min_margin[k] > 0.0);
  CHECK(m.spot_error < 1e-6);
  // on the axis row ∂_sθ vanishes
  CHECK(coordinate_transfer(0.5, 0.0).dtheta_ds == 0.0);
  CHECK_THROWS_AS(monotonicity_check(2.0, kT), ValidationError);
}

TEST_CASE("Killing extension of η") {
  const Setup S = make_setup(2, 3);
  const double w = S.eta.params.weight, tau = S.eta.params.tau;
  CHECK(killing_polar(S.eta.eta, 0.0, 0.2) == 0.0);
  // θ ≥ τ gives 0
  const double s = 0.4, t_far = t_at_angle(s, tau) + 0.05;
  CHECK(coordinate_transfer(s, t_far).theta > tau);
  CHECK(S.h(s, t_far) == 0.0);
  // ∂_t h on the axis is the weight
  for (double sv : {0.1, 0.3, 0.45}) CHECK(S.h.t_jet(sv, 0.0).deriv(1) == Approx(w).epsilon(1e-10));
  // h agrees with sin r · η(θ)
  const Transfer x = coordinate_transfer(0.3, 0.05);
  CHECK(S.h(0.3, 0.05) == Approx(std::sin(x.r) * S.eta.eta(x.theta)).epsilon(1e-14));
}

TEST_CASE("h̄ extension") {
  const Setup S = make_setup(2, 3);
  const double w = S.eta.params.weight, tau = S.eta.params.tau;
  const double t_small = 0.5 * t_at_angle(kRho / 2, S.eta.params.tau_of_delta);
  for (double s : {0.1, 1.0, 2.5}) {
    CHECK(S.hbar(s, t_small) == Approx(w * std::sin(t_small)).epsilon(1e-12));
    CHECK(S.hbar.s_jet(s, 0.2).deriv(1) == 0.0);
    CHECK(S.hbar(s, 0.2) == S.hbar(0.3, 0.2));
  }
  CHECK(S.hbar(1.0, t_at_angle(kRho / 2, tau) + 1e-3) == 0.0);
}

TEST_CASE("spherical tube is the suspension chart in other coordinates") {
  const auto q = make_quotient_profile(2, 3);
  const ChartMetric ball = ball_suspension_metric(q.R, kRho * 1.2);
  const TubeChart tube = suspension_tube(q.R, 2, kRho, kT);
  const ChartMetric g = tube_metric(tube, SectionField([](double, double) { return 0.0; }));
  for (const auto& [s, t] : {std::pair{0.5, 0.2}, std::pair{0.8, 0.4}, std::pair{0.3, 0.1}}) {
    const Transfer x = coordinate_transfer(s, t);
    const Mat gb = ball(make_point({x.r, x.theta, 1.0}));
    Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
    J << x.dr_ds, x.dr_dt, 0, x.dtheta_ds, x.dtheta_dt, 0, 0, 0, 1;
    const Eigen::Matrix3d pulled = J.transpose() * gb * J;
    const Mat gt = g(make_point({s, t, 1.0}));
    CHECK((pulled - Eigen::Matrix3d(gt)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("tube invariants are enforced") {
  const auto q = make_quotient_profile(2, 3);
  CHECK_THROWS_AS(suspension_tube(q.R, 3, kRho, kT), ValidationError);
  CHECK_THROWS_AS(suspension_tube(q.R, 2, kRho, 1.2), ValidationError);
  CHECK_THROWS_AS(suspension_tube(q.R, 2, 1.7, kT), ValidationError);
}

TEST_CASE("block curvature operator agrees with the oracle") {
  const Setup S = make_setup(2, 3);
  const ChartMetric g = tube_metric(S.tube, S.hbar);
  for (const auto& [s, t] : {std::pair{0.6, 0.15}, std::pair{1.5, 0.3}, std::pair{2.4, 0.08}}) {
    const Vec p = make_point({s, t, kPi});
    const CurvatureOperator op = curvature_operator(g, p, tube_frame(S.tube, S.hbar, s, t));
    const Eigen::Matrix3d B = block_curvature_operator(S.tube, S.hbar, s, t);
    CAPTURE(s);
    CAPTURE(t);
    CHECK((op.matrix - B).cwiseAbs().maxCoeff() <= 1e-4);
  }
}

TEST_CASE("h̄ Hessian formula matches the chart Hessian") {
  const Setup S = make_setup(2, 3);
  const ChartMetric sec = section_metric(S.tube);
  const SectionField hb = S.hbar;
  for (const auto& [s, t] : {std::pair{0.8, 0.1}, std::pair{1.9, 0.2}}) {
    const Mat oracle = hessian_scalar(sec, [hb](const Vec& p) { return hb(p(0), p(1)); },
                                      make_point({s, t}));
    const Mat formula = hbar_hessian_formula(S.tube, S.hbar, s, t);
    CHECK((oracle - formula).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("tube metric is regular along the axis") {
  for (const auto& [mm, mp] : {std::pair{1, 1}, std::pair{2, 3}}) {
    const Setup S = make_setup(mm, mp);
    const SectionField hb = mm == 1 ? SectionField([](double, double) { return 0.0; },
                                                   [](double, double) { return Jet4(); },
                                                   [](double, double) { return Jet4(); })
                                    : S.hbar;
    for (double s : {0.7, 1.6, 2.5}) {
      const double step = 0.25 * t_at_angle(kRho / 2, S.eta.params.tau_of_delta);
      const AxisRegularity a = axis_regularity(S.tube, hb, s, step);
      CHECK(a.finite);
      CHECK(a.xi[0] == Approx(0.0).scale(1.0).epsilon(1e-12));
      CHECK(a.xi[2] == Approx(1.0).epsilon(1e-9));
      CHECK(std::abs(a.odd_first) <= 1e-5);
      CHECK(std::abs(a.odd_third) <= 1e-2);
    }
  }
}

TEST_CASE("tube curvature is positive with the resolving field") {
  const Setup S = make_setup(2, 3);
  const ThresholdCheck c = tube_threshold_check(S.tube, S.eta.params.tau, kT);
  CHECK(c.sign_ok);
  CHECK(c.support_ok);
  CHECK(c.half_angle_t < c.support);
  const TubeSweep sw = tube_curvature_sweep(S.tube, S.hbar, 16, 16);
  CHECK(sw.points == 256);
  CHECK(sw.min_curvature > 0.0);
}

TEST_CASE("min-glued profile") {
  const Setup S = make_setup(2, 3);
  const double l = S.tube.length, w = S.eta.params.weight;
  const SectionField htilde = S.h.reflected(l);
  const MinGlue psi = psi_min_glue(S.tube.phi, S.h, S.hbar, htilde, kRho, l, kT);
  CHECK(psi.seam_mismatch(kT) <= 1e-12);
  const double t_axis = 0.5 * t_at_angle(0.2, S.eta.params.tau_of_delta);
  for (double s : {0.2, 0.5, 1.5, 2.9}) {
    CHECK(psi(s, t_axis) == Approx(S.tube.phi(s, t_axis) + w * std::sin(t_axis)).epsilon(1e-12));
  }
  CHECK(psi(1.5, 0.3) == S.tube.phi(1.5, 0.3) + S.hbar(1.5, 0.3));
  CHECK(psi(0.2, 0.1) == S.tube.phi(0.2, 0.1) + S.h(0.2, 0.1));
  CHECK(psi(l - 0.2, 0.1) == Approx(S.tube.phi(l - 0.2, 0.1) + S.h(0.2, 0.1)).epsilon(1e-14));

  // derivative jumps sit on the seam inside the band of angles where η is not w sin θ
  const SeamScan scan = seam_jump_scan(psi, kT);
  CHECK(scan.jumps > 0);
  CHECK(scan.theta_lo >= S.eta.params.tau_of_delta - 1e-9);
  CHECK(scan.theta_hi <= S.eta.params.tau + 1e-9);

  const SectionField bad([](double s, double t) { return 0.01 * s * t; });
  CHECK_THROWS_AS(psi_min_glue(S.tube.phi, S.h, S.h + bad, htilde, kRho, l, kT), ValidationError);
}

TEST_CASE("pointwise minimum of concave pieces passes midpoint tests") {
  const Setup S = make_setup(2, 3);
  const SectionField phi = S.tube.phi, h = S.h, hb = S.hbar;
  auto f1 = [&](double s, double t) { return phi(s, t) + h(s, t); };
  auto f2 = [&](double s, double t) { return phi(s, t) + hb(s, t); };
  auto mn = [&](double s, double t) { return std::min(f1(s, t), f2(s, t)); };
  const ConcavityReport r1 = midpoint_concavity(f1, kRho, 100000, 1);
  const ConcavityReport r = midpoint_concavity(mn, kRho, 100000, 2);
  CHECK(r1.pass);
  CHECK(r.pass);
  CHECK(r.trials == 100000);
  // a convex function fails
  const ConcavityReport bad = midpoint_concavity([](double s, double t) { return s * s + t * t; },
                                                 kRho, 1000, 3);
  CHECK_FALSE(bad.pass);
}
