#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orbsmooth/error.hpp"
#include "orbsmooth/embedding.hpp"
#include "orbsmooth/greene_wu.hpp"
#include "orbsmooth/quadrature.hpp"
#include "orbsmooth/quotient.hpp"

using namespace orbsmooth;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Meridian of the κ-sphere: v = atan(1/a) − atan(cos(√κ r)/a), a = √(κ − 1).
double sphere_v(double kappa, double r) {
  const double a = std::sqrt(kappa - 1.0);
  return std::atan(1.0 / a) - std::atan(std::cos(std::sqrt(kappa) * r) / a);
}

RevolutionMetric hopf_metric() {
  RevolutionMetric g;
  g.d = kPi / 2;
  g.R = make_quotient_profile(1, 1).R;
  g.label = "hopf";
  return g;
}

// Second moment of the unit-mass mollifier on the ball of radius 1/n in R³.
double second_moment(int n) {
  const double w = 1.0 / n;
  auto s = [w](double p) { return p < w ? mollifier_profile(p / w) : 0.0; };
  return integrate([&](double p) { return p * p * p * p * s(p); }, 0.0, w, 64, 16) /
         integrate([&](double p) { return p * p * s(p); }, 0.0, w, 64, 16);
}

}  // namespace

TEST_CASE("smooth corpus satisfies the embedding hypotheses") {
  for (const RevolutionMetric& g : {space_form_sphere(2.0), space_form_sphere(4.0), spindle(2), hopf_metric()}) {
    CAPTURE(g.label);
    const RevolutionReport rep = inspect_revolution(g);
    CHECK(rep.curvature_ok);
    CHECK(rep.energy_ok);
    CHECK(rep.sup_R < 1.0);
    CHECK(rep.max_energy <= 1.0 + 1e-10);
  }
  CHECK(inspect_revolution(space_form_sphere(4.0)).min_curvature == Approx(4.0).epsilon(1e-6));
  CHECK(inspect_revolution(spindle(3)).tip_slope0 == Approx(1.0 / 3).epsilon(1e-10));
  CHECK(space_form_sphere(4.0).d == Approx(kPi / 2));
  CHECK_THROWS_AS(space_form_sphere(0.5), ValidationError);
}

TEST_CASE("embedding ODE matches the closed-form meridian of a κ-sphere") {
  for (double kappa : {2.0, 4.0}) {
    const RevolutionMetric g = space_form_sphere(kappa);
    const EmbeddingCurve c = solve_embedding_ode(g, 1e-3);
    CHECK(c.v.front() == 0.0);
    CHECK(c.dv.front() == 0.0);
    CHECK(c.v.back() == Approx(2 * std::atan(1 / std::sqrt(kappa - 1))).epsilon(1e-12));
    for (double r : {0.1, 0.37, 0.9 * g.d}) CHECK(c.value(r) == Approx(sphere_v(kappa, r)).epsilon(1e-10));
  }
  CHECK(solve_embedding_ode(space_form_sphere(4.0)).v.back() == Approx(kPi / 3).epsilon(1e-13));
}

TEST_CASE("pullback residual is small and converges at fourth order") {
  for (const RevolutionMetric& g : {space_form_sphere(2.0), space_form_sphere(4.0), spindle(2), hopf_metric()}) {
    CAPTURE(g.label);
    CHECK(pullback_check(g, solve_embedding_ode(g, 1e-4)) <= 1e-8);
    const double e1 = pullback_check(g, solve_embedding_ode(g, 1e-2));
    const double e2 = pullback_check(g, solve_embedding_ode(g, 1e-3));
    CHECK(std::log10(e1 / e2) == Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("perturbed meridian fails the pullback check") {
  const RevolutionMetric g = space_form_sphere(4.0);
  const EmbeddingCurve c = solve_embedding_ode(g, 1e-3);
  CHECK(pullback_check(g, scaled_curve(c, 1.01)) > 1e-3);
  CHECK(pullback_check(g, scaled_curve(c, 1.0)) == pullback_check(g, c));
}

TEST_CASE("embedded surface lies on S³ with the right metric") {
  const RevolutionMetric g = space_form_sphere(2.0);
  const EmbeddingCurve c = solve_embedding_ode(g, 1e-4);
  const double h = 1e-5;
  for (double r : {0.3, 1.0, 1.8}) {
    for (double th : {0.0, 1.0}) {
      CHECK(surface_point(g, c, r, th).norm() == Approx(1.0).epsilon(1e-14));
      const double lr = (surface_point(g, c, r + h, th) - surface_point(g, c, r - h, th)).norm() / (2 * h);
      const double lt = (surface_point(g, c, r, th + h) - surface_point(g, c, r, th - h)).norm() / (2 * h);
      CHECK(lr == Approx(1.0).epsilon(1e-7));
      CHECK(lt == Approx(g.R(r)).epsilon(1e-7));
    }
  }
  const ImmersionReport im = immersion_check(g, c);
  CHECK(im.immersed);
  CHECK(im.min_singular > 0.0);
}

TEST_CASE("rigid and inadmissible profiles are refused") {
  CHECK_THROWS_AS(solve_embedding_ode(space_form_sphere(1.0)), ValidationError);
  RevolutionMetric steep;
  steep.d = 1.0;
  steep.R = ProfileFunction(0.0, 1.0, [](double r) { return 0.6 * sin(2.0 * Jet4::variable(r)); }, 4);
  CHECK(embedding_radicand(steep, 0.0) < 0.0);
  CHECK_THROWS_AS(solve_embedding_ode(steep, 1e-3), ValidationError);
}

TEST_CASE("central projection") {
  Eigen::VectorXd c(4), q(4);
  c << 0, 0, 0, 1;
  CHECK((beltrami(c, c) - c).norm() == 0.0);
  q << std::sin(kPi / 4), 0, 0, std::cos(kPi / 4);
  CHECK((beltrami(c, q) - c).norm() == Approx(1.0).epsilon(1e-15));
  // great circles go to straight lines
  Eigen::VectorXd a(4), b(4);
  a << 0.3, 0.1, -0.2, 0.9;
  b << -0.1, 0.4, 0.2, 0.85;
  a.normalize();
  b.normalize();
  const Eigen::VectorXd pa = beltrami(c, a), pb = beltrami(c, b);
  for (double t : {0.2, 0.5, 0.8}) {
    const Eigen::VectorXd m = beltrami(c, ((1 - t) * a + t * b).normalized());
    const Eigen::VectorXd u = m - pa, w = pb - pa;
    CHECK((u - u.dot(w) / w.squaredNorm() * w).norm() <= 1e-14);
  }
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd x(4);
    for (int k = 0; k < 4; ++k) x(k) = N(rng);
    x.normalize();
    if (x(3) < 0.05) continue;
    CHECK((beltrami_inverse(c, beltrami(c, x)) - x).norm() <= 1e-12);
  }
  Eigen::VectorXd off(4);
  off << 1, 0, 0, 2;
  CHECK_THROWS_AS(beltrami_inverse(c, off), ValidationError);
  CHECK_THROWS_AS(beltrami(c, Eigen::VectorXd::Unit(4, 0)), ValidationError);
}

TEST_CASE("radial mollification") {
  // constants and the exact second moment
  const RadialProfile one = radial_mollify([](double) { return 3.0; }, 4);
  CHECK(one(0.0) == Approx(3.0).epsilon(1e-14));
  CHECK(one(0.7) == Approx(3.0).epsilon(1e-14));
  for (int n : {2, 5}) {
    const RadialProfile sq = radial_mollify([](double s) { return s * s; }, n);
    for (double s : {0.0, 0.05, 0.6, 2.0}) CHECK(sq(s) == Approx(s * s + second_moment(n)).epsilon(1e-10));
  }
  // order 2 for smooth inputs, order 1 at the cone vertex
  auto dev = [](const RadialProfile& F, int n, double s) { return std::abs(radial_mollify(F, n)(s) - F(s)); };
  const RadialProfile ch = [](double s) { return std::cosh(s); };
  CHECK(dev(ch, 8, 0.3) / dev(ch, 16, 0.3) == Approx(4.0).epsilon(0.02));
  const RadialProfile cone = [](double s) { return s; };
  CHECK(dev(cone, 8, 0.0) / dev(cone, 16, 0.0) == Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(radial_mollify(cone, 0), ValidationError);
}

TEST_CASE("convex mollification of a cone") {
  const RadialProfile cone = [](double s) { return 1.7 * s; };
  const double r = 0.5;
  const RadialProfile f = convex_mollify(cone, 8, r);
  // unchanged outside the r-ball, smooth at the vertex
  for (double s : {r, 0.8, 2.0}) CHECK(f(s) == cone(s));
  CHECK(f(0.0) > 0.0);
  const double h = 1e-3;
  CHECK(std::abs(f(h) - f(-h)) <= 1e-15);
  const ConvexityCheck cc = radial_midpoint_convexity(f, r, 1.0, 100000, 42);
  CHECK(cc.pass);
  CHECK(cc.trials == 100000);
  // a concave profile fails the midpoint test and is refused
  const RadialProfile cap = [](double s) { return -s * s; };
  CHECK_FALSE(radial_midpoint_convexity(cap, r, 1.0, 1000, 1).pass);
  CHECK_THROWS_AS(convex_mollify(cap, 8, r), ValidationError);
  CHECK_THROWS_AS(convex_mollify([](double s) { return (s - 0.3) * (s - 0.3); }, 8, r), ValidationError);
}

TEST_CASE("tangent cones at a tip") {
  for (double kappa : {2.0, 4.0}) {
    const ConeGraph cg = cone_from_tip(space_form_sphere(kappa));
    CHECK_FALSE(cg.flat);
    CHECK(cg.radial());
    CHECK(cg.slope_min == Approx(std::sqrt(kappa - 1)).epsilon(1e-6));
    const Eigen::Vector3d u(0.3, -0.4, 0.5);
    CHECK(cg.f(2.0 * u) == Approx(2.0 * cg.f(u)).epsilon(1e-10));
  }
  const ConeGraph round = cone_from_tip(space_form_sphere(1.0));
  CHECK(round.flat);
  CHECK(round.f(Eigen::Vector3d(1, 2, 3)) == 0.0);
  const ConeGraph sp = cone_from_tip(spindle(2));
  CHECK_FALSE(sp.radial());
  CHECK(sp.slope_min >= 0.0);
}
