#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orbsmooth/error.hpp"
#include "orbsmooth/gluing.hpp"
#include "orbsmooth/smoothstep.hpp"

using namespace orbsmooth;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// (t, r, θ) metric; r ranges over (−1, 1) so the axis is interior.
ChartMetric polar(std::function<Mat(double, double, double)> f) {
  return ChartMetric({{"t", -1.0, 1.0}, {"r", -1.0, 1.0}, {"theta", 0.0, 2 * kPi}},
                     [f](const Vec& p) { return f(p(0), p(1), p(2)); });
}

Mat diag3(double a, double b, double c) {
  Mat g = Mat::Zero(3, 3);
  g(0, 0) = a;
  g(1, 1) = b;
  g(2, 2) = c;
  return g;
}

// S³ as dr² + cos²r dt² + sin²r dθ², written in (t, r, θ).
Mat round_polar(double, double r, double) {
  return diag3(std::cos(r) * std::cos(r), 1.0, std::sin(r) * std::sin(r));
}

}  // namespace

TEST_CASE("cutoff function values and scale-invariant bounds") {
  for (double eps : {0.2, 0.1, 0.05, 0.01}) {
    CAPTURE(eps);
    const CutoffFunction c = build_cutoff(eps);
    CHECK(c.margin_d1 > 0.0);
    CHECK(c.margin_d2 > 0.0);
    CHECK(c.sup_x_d1 <= eps);
    CHECK(c.sup_x2_d2 <= eps);
    CHECK(c.log_delta == Approx(std::log(eps) - c.K / eps).epsilon(1e-14));
    CHECK(c(eps) == 0.0);
    CHECK(c(2 * eps) == 0.0);
    CHECK(c(0.0) == 1.0);
    if (c.delta > 0.0) CHECK(c(c.delta) == 1.0);
    // independent log-grid sweep through ln x
    double s1 = 0.0, s2 = 0.0;
    const double lo = c.log_delta, hi = std::log(eps);
    for (int i = 0; i <= 20000; ++i) {
      const auto d = c.scaled_derivatives(lo + (hi - lo) * i / 20000.0);
      CHECK(d[0] >= 0.0);
      CHECK(d[0] <= 1.0);
      s1 = std::max(s1, std::abs(d[1]));
      s2 = std::max(s2, std::abs(d[2]));
    }
    CHECK(s1 <= eps);
    CHECK(s2 <= eps);
  }
  CHECK_THROWS_AS(build_cutoff(0.0), ValidationError);
  CHECK_THROWS_AS(build_cutoff(1.0), ValidationError);
}

TEST_CASE("scaled derivatives agree with differences in ln x") {
  const CutoffFunction c = build_cutoff(0.2);
  const double u = 0.5 * (c.log_delta + std::log(0.2)), h = 1e-4;
  const auto d = c.scaled_derivatives(u);
  const double fp = c.scaled_derivatives(u + h)[0], fm = c.scaled_derivatives(u - h)[0];
  // xφ′ = dφ/du, x²φ″ = d²φ/du² − dφ/du
  CHECK(d[1] == Approx((fp - fm) / (2 * h)).epsilon(1e-6));
  CHECK(d[2] == Approx((fp - 2 * d[0] + fm) / (h * h) - d[1]).epsilon(1e-5));
  CHECK(c(std::exp(u)) == Approx(d[0]).epsilon(1e-12));
}

TEST_CASE("cutoff constant is the smallest that works at ε = 1") {
  // sup over u of |S′|/L and |S″/L² + S′/L| with L = K/ε at ε = 1
  auto worst = [](double K) {
    double w = 0.0;
    for (int i = 1; i < 200000; ++i) {
      const auto j = smoothstep(Jet<2>::variable(i / 200000.0));
      const double s1 = j.deriv(1), s2 = j.deriv(2);
      w = std::max({w, std::abs(s1) / K, std::abs(s2 / (K * K) + s1 / K)});
    }
    return w;
  };
  const double K = cutoff_constant();
  CHECK(K == Approx(4.295).epsilon(2e-3));
  CHECK(worst(K) <= 1.0);
  // the joint sup sits well below the bound; the constant is conservative, not sharp
  CHECK(worst(0.5 * K) > 1.0);
}

TEST_CASE("blend of a metric with itself is the metric") {
  const ChartMetric g = polar(round_polar);
  const CutoffFunction c = build_cutoff(0.1);
  const std::vector<Vec> axis{make_point({0.0, 0.0, 1.0}), make_point({0.5, 0.0, 1.0})};
  const ChartMetric h = blend_metrics(g, g, [](const Vec& p) { return std::abs(p(1)); }, c, axis);
  for (double r : {0.001, 0.05, 0.3}) {
    const Vec p = make_point({0.2, r, 1.0});
    CHECK((h(p) - g(p)).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("blend equals the second metric where the cutoff is 1") {
  const AxisPair P = stereographic_axis_pair(1.0);
  const CutoffFunction c = build_cutoff(0.1);
  const HyperMetric h = blend_difference(P.g, P.difference, P.dist_to_N, c, P.axis_points);
  const Vec p = axis_pair_point(1e-21, 0.1, 0.4);
  CHECK((h.value(p) - P.g_tilde.value(p)).cwiseAbs().maxCoeff() <= 1e-15);
  const Vec q = axis_pair_point(0.2, 0.1, 0.4);
  CHECK((h.value(q) - P.g.value(q)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("blended axis pair keeps curvature above 1 − ε") {
  const AxisPair P = stereographic_axis_pair(1.0);
  for (const Vec& p : P.axis_points) {
    CHECK((P.g.value(p) - P.g_tilde.value(p)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(min_sectional_exact(P.g_tilde, p) == Approx(1.0).epsilon(1e-10));
  }
  const BlendStudy b = axis_pair_blend_study(P, 0.1);
  CHECK(b.input_min == Approx(1.0).epsilon(1e-8));
  CHECK(b.min_curvature >= 0.9);
  CHECK(b.min_curvature < 1.0);
  CHECK(b.fd_max_gap <= 1e-4);
  CHECK(b.fd_points > 0);
  // halving ε halves the drop
  const BlendStudy b2 = axis_pair_blend_study(P, 0.05);
  CHECK((1.0 - b2.min_curvature) / (1.0 - b.min_curvature) == Approx(0.5).epsilon(0.1));
}

TEST_CASE("first-order disagreement is refused") {
  const AxisPair P = stereographic_axis_pair(1.0, 2);
  CHECK_THROWS_AS(blend_difference(P.g, P.difference, P.dist_to_N, build_cutoff(0.1), P.axis_points),
                  ValidationError);
  const FirstOrderGap gap = first_order_gap(P.g, P.g_tilde, P.axis_points);
  CHECK(gap.value <= 1e-12);
  CHECK(gap.derivative > 1e-3);
  const AxisPair Q = stereographic_axis_pair(1.0, 3);
  CHECK(first_order_gap(Q.g, Q.g_tilde, Q.axis_points).derivative <= 1e-12);
  CHECK(first_order_gap(Q.g.chart(), Q.g_tilde.chart(), Q.axis_points).derivative <= 1e-4);
}

TEST_CASE("blend preserves a shared circle symmetry") {
  const ChartMetric g = polar(round_polar);
  const ChartMetric gt = polar([](double t, double r, double th) {
    Mat m = round_polar(t, r, th);
    m(0, 0) += std::pow(r, 4) * (1 + t * t);
    return m;
  });
  const ChartMetric h = blend_metrics(g, gt, [](const Vec& p) { return std::abs(p(1)); }, build_cutoff(0.1),
                                      {make_point({0.0, 0.0, 1.0})});
  for (double r : {1e-3, 0.02, 0.07}) {
    const Mat a = h(make_point({0.3, r, 0.4})), b = h(make_point({0.3, r, 2.9}));
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_NOTHROW(require_circle_invariant(h));
}

TEST_CASE("constant curvature cap") {
  const CutoffFunction c = build_cutoff(0.1);
  const HyperMetric s1 = space_form_normal(1.0, 0.5);
  // κ = 1 cap on the round chart: unchanged
  const HyperMetric same = constant_curvature_cap(s1, 1.0, 1.0, c, space_form_difference(1.0, 1.0));
  for (double r : {1e-21, 0.01, 0.3}) {
    const Vec p = make_point({r, 0.0, 0.0});
    CHECK((same.value(p) - s1.value(p)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  // κ = 4 cap on the round chart
  const HyperMetric capped = constant_curvature_cap(s1, 4.0, 1.0, c, space_form_difference(1.0, 4.0));
  CHECK(min_sectional_exact(capped, make_point({1e-21, 0.0, 0.0})) == Approx(4.0).epsilon(1e-8));
  double lo = INFINITY;
  for (int k = 0; k <= 200; ++k) {
    const double r = std::exp(c.log_delta + (std::log(0.12) - c.log_delta) * k / 200.0);
    lo = std::min(lo, min_sectional_exact(capped, make_point({r / std::sqrt(2.0), r / std::sqrt(2.0), 0.0})));
  }
  CHECK(lo >= 0.9);
  CHECK(min_sectional_exact(capped, make_point({0.2, 0.0, 0.0})) == Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(constant_curvature_cap(s1, 0.5, 1.0, c), ValidationError);
}

TEST_CASE("space forms in normal coordinates") {
  for (double kappa : {-1.0, 0.0, 1.0, 4.0}) {
    const HyperMetric g = space_form_normal(kappa, 0.4);
    for (const Vec& p : {make_point({0.1, -0.2, 0.05}), make_point({0.3, 0.1, -0.2})}) {
      CHECK(min_sectional_exact(g, p) == Approx(kappa).epsilon(1e-9).scale(1.0));
    }
    // normal coordinates: radial lines have unit speed
    const Vec p = make_point({0.2, 0.1, -0.1});
    const Vec u = p / p.norm();
    CHECK(u.dot(g.value(p) * u) == Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(space_form_normal(4.0, 1.0), ValidationError);
}

TEST_CASE("dropping the cross term") {
  // already polar: unchanged
  const ChartMetric g = polar(round_polar);
  const ChartMetric d = drop_cross_term(g);
  const Vec p = make_point({0.2, 0.3, 1.0});
  CHECK((d(p) - g(p)).cwiseAbs().maxCoeff() == 0.0);

  auto with_cross = [](int power) {
    return polar([power](double t, double r, double th) {
      Mat m = round_polar(t, r, th);
      m(0, 2) = m(2, 0) = std::pow(r, power) * 0.3 * std::cos(t);
      return m;
    });
  };
  const ChartMetric g4 = with_cross(4), h4 = drop_cross_term(g4);
  CHECK(h4(p)(0, 2) == 0.0);
  CHECK(h4(p)(0, 0) == g4(p)(0, 0));
  const AxisAgreement a4 = axis_agreement(g4, h4, {-0.3, 0.0, 0.4});
  CHECK(a4.second_order);
  CHECK(a4.order == Approx(3.0).epsilon(0.05));
  const ChartMetric g2 = with_cross(2);
  const AxisAgreement a2 = axis_agreement(g2, drop_cross_term(g2), {0.0, 0.4});
  CHECK_FALSE(a2.second_order);
  CHECK(a2.order == Approx(1.0).epsilon(0.05));

  // curvature on the axis is unchanged
  const ChartMetric c4 = polar_to_cartesian(g4), ch = polar_to_cartesian(h4);
  for (double t : {0.0, 0.3}) {
    const Vec q = make_point({t, 0.0, 0.0});
    CHECK(min_sectional_curvature(c4, q) == Approx(min_sectional_curvature(ch, q)).epsilon(1e-4));
  }
  CHECK_THROWS_AS(drop_cross_term(polar([](double t, double r, double th) {
                    Mat m = round_polar(t, r, th);
                    m(1, 1) += 0.1 * std::cos(th);
                    return m;
                  })),
                  ValidationError);
}

TEST_CASE("circle averaging") {
  const ChartMetric g = polar(round_polar);
  const ChartMetric avg = average_circle_action(g);
  const Vec p = make_point({0.1, 0.4, 2.0});
  CHECK((avg(p) - g(p)).cwiseAbs().maxCoeff() <= 1e-14);

  const ChartMetric pert = polar([](double t, double r, double th) {
    Mat m = round_polar(t, r, th);
    m(1, 1) *= 1.0 + 0.1 * std::cos(th);
    return m;
  });
  CHECK_THROWS_AS(require_circle_invariant(pert), ValidationError);
  const ChartMetric A = average_circle_action(pert);
  CHECK(A(p)(1, 1) == Approx(1.0).epsilon(1e-14));
  CHECK_NOTHROW(require_circle_invariant(A));
  const ChartMetric AA = average_circle_action(A);
  for (double th : {0.0, 1.0, 4.0}) {
    const Vec q = make_point({0.1, 0.4, th});
    CHECK((AA(q) - A(q)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("averaging keeps the lower curvature bound along the axis") {
  // perturbation vanishing to high order at the axis; curvature there stays 1
  const ChartMetric pert = polar([](double t, double r, double th) {
    Mat m = round_polar(t, r, th);
    m(0, 0) += 0.2 * std::pow(r, 4) * std::cos(th);
    return m;
  });
  const ChartMetric A = polar_to_cartesian(average_circle_action(pert));
  double input_lo = INFINITY;
  const ChartMetric C = polar_to_cartesian(pert);
  for (double t : {0.0, 0.3}) {
    const Vec q = make_point({t, 0.0, 0.0});
    input_lo = std::min(input_lo, min_sectional_curvature(C, q));
    CHECK(min_sectional_curvature(A, q) >= input_lo - 1e-4);
    CHECK(min_sectional_curvature(A, q) == Approx(1.0).epsilon(1e-4));
  }
}
