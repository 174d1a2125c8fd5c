#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orbsmooth/chart.hpp"
#include "orbsmooth/error.hpp"

using namespace orbsmooth;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ChartMetric polar_plane() {
  return ChartMetric({{"r", 0.0, 5.0}, {"theta", 0.0, 2 * kPi}}, [](const Vec& p) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = p(0) * p(0);
    return g;
  });
}

ChartMetric warped(std::function<double(double)> f, double hi) {
  return ChartMetric({{"r", 0.0, hi}, {"theta", 0.0, 2 * kPi}}, [f](const Vec& p) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = f(p(0)) * f(p(0));
    return g;
  });
}

// dr² + sin²r (dθ² + sin²θ dα²)
ChartMetric round_s3() {
  return ChartMetric({{"r", 0.0, kPi}, {"theta", 0.0, kPi}, {"alpha", 0.0, 2 * kPi}},
                     [](const Vec& p) {
                       Mat g = Mat::Zero(3, 3);
                       const double s = std::sin(p(0));
                       g(0, 0) = 1.0;
                       g(1, 1) = s * s;
                       g(2, 2) = s * s * std::sin(p(1)) * std::sin(p(1));
                       return g;
                     });
}

// A generic metric with off-diagonal terms.
ChartMetric skew_metric() {
  return ChartMetric({{"x", -1, 1}, {"y", -1, 1}, {"z", -1, 1}}, [](const Vec& p) {
    Mat g(3, 3);
    const double x = p(0), y = p(1), z = p(2);
    g << 2 + std::sin(x * y), 0.3 * std::cos(z), 0.1 * x * z,  //
        0.3 * std::cos(z), 1.5 + y * y, 0.2 * std::sin(x),    //
        0.1 * x * z, 0.2 * std::sin(x), 1 + std::exp(0.3 * z);
    return g;
  });
}

}  // namespace

TEST_CASE("Christoffel symbols of polar and spherical charts") {
  const auto G = christoffel(polar_plane(), make_point({1.0, 1.0}));
  CHECK(G(0, 1, 1) == Approx(-1.0).epsilon(1e-7));
  CHECK(G(1, 0, 1) == Approx(1.0).epsilon(1e-7));
  CHECK(G(1, 1, 0) == Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(G(0, 0, 0)) < 1e-9);

  const auto S = christoffel(warped([](double r) { return std::sin(r); }, kPi),
                             make_point({kPi / 4, 1.0}));
  CHECK(S(0, 1, 1) == Approx(-0.5).epsilon(1e-7));
  CHECK(S(1, 0, 1) == Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Riemann tensor has the algebraic symmetries") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 5; ++i) {
    const Tensor4 rm = riemann(skew_metric(), make_point({u(rng), u(rng), u(rng)}));
    CHECK(riemann_symmetry_violation(rm) < 1e-5);
  }
}

TEST_CASE("sign convention: sphere +1, hyperbolic plane −1, flat 0") {
  CHECK_NOTHROW(verify_sign_convention());
  const PlaneSection plane{make_point({1.0, 2.0}), make_point({1.0, 0.0}), make_point({0.0, 1.0})};
  CHECK(sectional_curvature(warped([](double r) { return std::sin(r); }, kPi), plane) ==
        Approx(1.0).epsilon(1e-6));
  CHECK(sectional_curvature(warped([](double r) { return std::sinh(r); }, 3.0), plane) ==
        Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(sectional_curvature(polar_plane(), plane)) < 1e-6);
  // Rm(∂r,∂θ,∂θ,∂r) = sin²r on the sphere
  const Tensor4 rm = riemann(warped([](double r) { return std::sin(r); }, kPi),
                             make_point({1.0, 2.0}));
  CHECK(rm(0, 1, 1, 0) == Approx(std::sin(1.0) * std::sin(1.0)).epsilon(1e-6));
}

TEST_CASE("warped curvature is −f''/f") {
  const ProfileFunction f(0.0, 2.0, [](double r) {
    const auto x = Jet4::variable(r);
    return sin(2.0 * x) * 0.5;
  }, 4);
  for (double r : {0.2, 0.7, 1.2}) {
    CHECK(warped2d_curvature(f, r) == Approx(4.0).epsilon(1e-9));
    CHECK(min_sectional_curvature(warped2d_chart(f), make_point({r, 1.0})) ==
          Approx(4.0).epsilon(1e-5));
  }
}

TEST_CASE("sectional curvature depends only on the plane") {
  const ChartMetric g = skew_metric();
  const Vec p = make_point({0.1, -0.2, 0.3});
  const Vec u = make_point({1.0, 0.2, -0.4}), v = make_point({0.3, 1.0, 0.5});
  const double k = sectional_curvature(g, {p, u, v});
  CHECK(sectional_curvature(g, {p, Vec(u + 2 * v), Vec(3 * v - u)}) == Approx(k).epsilon(1e-9));
  CHECK(sectional_curvature(g, {p, v, u}) == Approx(k).epsilon(1e-12));
}

TEST_CASE("round S³ has curvature operator equal to the identity") {
  const ChartMetric s3 = round_s3();
  const Vec p = make_point({1.1, 0.9, 2.0});
  const CurvatureOperator op = curvature_operator(s3, p, orthonormal_frame(s3, p));
  CHECK((op.matrix - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(min_sectional_curvature(s3, p) == Approx(1.0).epsilon(1e-5));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int i = 0; i < 10; ++i) {
    const Vec u = make_point({n(rng), n(rng), n(rng)}), v = make_point({n(rng), n(rng), n(rng)});
    CHECK(sectional_curvature(s3, {p, u, v}) == Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("orthonormal frame is g-orthonormal") {
  const ChartMetric g = skew_metric();
  const Vec p = make_point({0.4, 0.1, -0.5});
  const Mat e = orthonormal_frame(g, p);
  CHECK((e.transpose() * g(p) * e - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scalar Hessians in curvilinear charts") {
  // ∇²(r²) = 2g in the flat plane
  const Mat h = hessian_scalar(polar_plane(), [](const Vec& p) { return p(0) * p(0); },
                               make_point({1.5, 0.4}));
  CHECK(h(0, 0) == Approx(2.0).epsilon(1e-6));
  CHECK(h(1, 1) == Approx(2.0 * 1.5 * 1.5).epsilon(1e-6));
  CHECK(std::abs(h(0, 1)) < 1e-6);
  // ∇²(cos r) = −cos r · g on the unit sphere
  const double r = 0.8;
  const Mat s = hessian_scalar(warped([](double t) { return std::sin(t); }, kPi),
                               [](const Vec& p) { return std::cos(p(0)); }, make_point({r, 1.0}));
  CHECK(s(0, 0) == Approx(-std::cos(r)).epsilon(1e-6));
  CHECK(s(1, 1) == Approx(-std::cos(r) * std::sin(r) * std::sin(r)).epsilon(1e-6));
}

TEST_CASE("Killing length Hessian matches the mixed curvature") {
  // S³ as the hemisphere section dr² + sin²r dθ² with Killing length sin r sin θ
  const ChartMetric sigma = warped([](double t) { return std::sin(t); }, kPi);
  const ChartMetric sec({{"r", 0.0, kPi}, {"theta", 0.0, kPi}}, sigma.fn());
  auto phi = [](const Vec& p) { return std::sin(p(0)) * std::sin(p(1)); };
  const ChartMetric amb = killing_ambient(sec, phi);
  std::vector<Vec> pts{make_point({0.7, 1.0}), make_point({1.4, 0.5}), make_point({2.0, 2.2})};
  CHECK(killing_hessian_check(sec, phi, amb, pts) < 1e-5);
  for (const auto& q : pts) {
    CHECK(min_sectional_curvature(amb, make_point({q(0), q(1), 1.0})) == Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(riemann(polar_plane(), make_point({1e-5, 1.0})), DomainError);
  const ChartMetric bad({{"x", -1, 1}, {"y", -1, 1}}, [](const Vec&) {
    Mat g(2, 2);
    g << 1, 2, 2, 1;
    return g;
  });
  CHECK_THROWS_AS(riemann(bad, make_point({0.0, 0.0})), DomainError);
}
