#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orbsmooth/error.hpp"
#include "orbsmooth/greene_wu.hpp"
#include "orbsmooth/quadrature.hpp"

using namespace orbsmooth;
using doctest::Approx;

namespace {

using Kind = SectionGeometry::Kind;

// ∫ g(r) σ(r/w) r dr / ∫ σ(r/w) r dr over [0, w].
double radial_mean(const std::function<double(double)>& g, double w) {
  auto sig = [w](double r) { return std::exp(-1.0 / (1.0 - (r / w) * (r / w))); };
  const double num = integrate([&](double r) { return r < w ? g(r) * sig(r) * r : 0.0; }, 0.0, w, 64, 16);
  const double den = integrate([&](double r) { return r < w ? sig(r) * r : 0.0; }, 0.0, w, 64, 16);
  return num / den;
}

std::vector<Point2> grid_points(double lo, double hi, int n) {
  std::vector<Point2> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.emplace_back(lo + (hi - lo) * (i + 0.5) / n, lo + (hi - lo) * (j + 0.5) / n);
  return out;
}

}  // namespace

TEST_CASE("exponential maps move by the length of the vector") {
  const SectionGeometry round(Kind::round_fermi), flat(Kind::flat);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 200; ++i) {
    const Point2 p(u(rng), u(rng)), v(u(rng), u(rng));
    CHECK(round.distance(p, round.exp(p, v)) == Approx(v.norm()).epsilon(1e-12));
    CHECK((flat.exp(p, v) - (p + v)).norm() == 0.0);
  }
  // along the equator s moves, t stays
  const Point2 q = round.exp(Point2(0.1, 0.0), Point2(0.3, 0.0));
  CHECK(q(0) == Approx(0.4).epsilon(1e-14));
  CHECK(std::abs(q(1)) < 1e-15);
}

TEST_CASE("mollifier profile") {
  CHECK(mollifier_profile(0.0) == Approx(std::exp(-1.0)));
  CHECK(mollifier_profile(1.0) == 0.0);
  CHECK(mollifier_profile(1.5) == 0.0);
  CHECK(mollifier_profile(0.999) > 0.0);
}

TEST_CASE("convolution reproduces constants and radial moments") {
  const SectionGeometry flat(Kind::flat), round(Kind::round_fermi);
  const Point2 p(0.2, -0.1);
  const double w = 0.3;
  CHECK(riemannian_convolution(flat, [](const Point2&) { return 2.5; }, p, w) == Approx(2.5).epsilon(1e-15));
  CHECK(riemannian_convolution(round, [](const Point2&) { return 2.5; }, p, w) == Approx(2.5).epsilon(1e-15));
  // affine functions are preserved on the flat plane
  CHECK(riemannian_convolution(flat, [](const Point2& x) { return 1 + 3 * x(0) - x(1); }, p, w) ==
        Approx(1 + 3 * 0.2 + 0.1).epsilon(1e-14));
  // |x − p|² averages to the second radial moment
  auto sq = [p](const Point2& x) { return (x - p).squaredNorm(); };
  CHECK(riemannian_convolution(flat, sq, p, w) ==
        Approx(radial_mean([](double r) { return r * r; }, w)).epsilon(1e-6));
  // ambient coordinate x₁ on the unit sphere averages to x₁(p) cos r
  auto x1 = [](const Point2& x) { return std::cos(x(1)) * std::cos(x(0)); };
  CHECK(riemannian_convolution(round, x1, p, w) ==
        Approx(x1(p) * radial_mean([](double r) { return std::cos(r); }, w)).epsilon(1e-8));
  CHECK_THROWS_AS(riemannian_convolution(flat, sq, p, 0.0), ValidationError);
}

TEST_CASE("cutoff and blend") {
  const Field2 j = box_cutoff([](const Point2& x) { return std::abs(x(0)); }, 0.2);
  CHECK(j(Point2(0.05, 0.0)) == 1.0);
  CHECK(j(Point2(0.1, 0.0)) == 1.0);
  CHECK(j(Point2(0.2, 0.0)) == 0.0);
  CHECK(j(Point2(0.5, 0.0)) == 0.0);
  const double mid = j(Point2(0.15, 0.0));
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);

  Field2 psi = [](const Point2& x) { return std::sin(x(0)) + x(1); };
  const Field2 same = blend([](const Point2&) { return 1e9; }, psi, [](const Point2&) { return 0.0; });
  for (const Point2& x : grid_points(-1, 1, 5)) CHECK(same(x) == psi(x));
  CHECK_THROWS_AS(box_cutoff([](const Point2&) { return 0.0; }, 0.0), ValidationError);
}

TEST_CASE("distance to a meridian arc") {
  const SectionGeometry round(Kind::round_fermi);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int i = 0; i < 50; ++i) {
    const Point2 p(u(rng), u(rng));
    double brute = 1e300;
    for (int k = 0; k <= 20000; ++k) {
      const double t = -0.2 + 0.5 * k / 20000;
      brute = std::min(brute, round.distance(p, Point2(0.3, t)));
    }
    CHECK(meridian_arc_distance(0.3, -0.2, 0.3, p) == Approx(brute).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("smoothing a concave kink") {
  const SectionGeometry flat(Kind::flat);
  const double eps = 0.2;
  auto psi = [](const Point2& x) {
    return std::min(1 - x(0), 1 + x(0)) - 0.5 * x.squaredNorm();
  };
  auto dist = [](const Point2& x) { return std::abs(x(0)); };
  const auto probes = grid_points(-0.5, 0.5, 16);
  const GreeneWuResult r = greene_wu_smooth(flat, psi, dist, eps, {0.1, 0.05, 0.025}, probes);
  REQUIRE(r.first_concave >= 0);
  CHECK(r.levels[r.first_concave].concave);
  // unchanged outside the ε-neighbourhood of the kink
  for (const Point2& x : grid_points(-1, 1, 21)) {
    if (std::abs(x(0)) >= eps) CHECK(r.smoothed(x) == psi(x));
  }
  // smooth across the kink: second differences on a fine step are bounded
  const ConcavityProbe fine = second_difference_probe(flat, r.smoothed, {Point2(0.0, 0.1)}, 1e-3, 4);
  CHECK(fine.violations == 0);
  CHECK(fine.max_second > -100.0);

  // linear pieces are not strictly concave: refused
  auto linear = [](const Point2& x) { return std::min(1 - x(0), 1 + x(0)); };
  CHECK_THROWS_AS(greene_wu_smooth(flat, linear, dist, eps, {0.1}, probes), ValidationError);
}

TEST_CASE("smoothing a smooth function converges to it") {
  const SectionGeometry round(Kind::round_fermi);
  auto psi = [](const Point2& x) { return std::cos(x(1)) * std::cos(x(0)); };
  const Point2 p(0.1, 0.2);
  double prev = INFINITY;
  for (double w : {0.2, 0.1, 0.05, 0.025}) {
    const double dev = std::abs(riemannian_convolution(round, psi, p, w) - psi(p));
    CHECK(dev < prev);
    if (std::isfinite(prev)) CHECK(dev / prev == Approx(0.25).epsilon(0.02));
    prev = dev;
  }
}
