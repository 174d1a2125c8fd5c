#include "orbsmooth/greene_wu.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbsmooth/error.hpp"
#include "orbsmooth/quadrature.hpp"

namespace orbsmooth {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d embed(const Point2& p) {
  const double s = p(0), t = p(1);
  return {std::cos(t) * std::cos(s), std::cos(t) * std::sin(s), std::sin(t)};
}

Point2 chart(const Eigen::Vector3d& x) {
  const Eigen::Vector3d u = x.normalized();
  return {std::atan2(u(1), u(0)), std::asin(std::clamp(u(2), -1.0, 1.0))};
}

}  // namespace

Point2 SectionGeometry::exp(const Point2& p, const Point2& v) const {
  if (kind_ == Kind::flat) return p + v;
  const double len = v.norm();
  if (len == 0.0) return p;
  const double s = p(0), t = p(1);
  const Eigen::Vector3d x = embed(p);
  const Eigen::Vector3d e1(-std::sin(s), std::cos(s), 0.0);
  const Eigen::Vector3d e2(-std::sin(t) * std::cos(s), -std::sin(t) * std::sin(s),
                           std::cos(t));
  const Eigen::Vector3d dir = (v(0) * e1 + v(1) * e2) / len;
  return chart(std::cos(len) * x + std::sin(len) * dir);
}

double SectionGeometry::distance(const Point2& p, const Point2& q) const {
  if (kind_ == Kind::flat) return (p - q).norm();
  const Eigen::Vector3d a = embed(p), b = embed(q);
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double mollifier_profile(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

double riemannian_convolution(const SectionGeometry& geom, const Field2& f,
                              const Point2& p, double width, ConvolutionRule rule) {
  if (!(width > 0.0)) throw ValidationError("mollifier width must be positive");
  const GaussRule& g = gauss_legendre(rule.radial);
  double num = 0.0, mass = 0.0;
  for (int i = 0; i < rule.radial; ++i) {
    const double r = 0.5 * width * (g.x[i] + 1.0);
    const double w = g.w[i] * r * mollifier_profile(r / width);
    if (w == 0.0) continue;
    double ring = 0.0;
    for (int k = 0; k < rule.angular; ++k) {
      const double a = 2.0 * kPi * k / rule.angular;
      ring += f(geom.exp(p, Point2(r * std::cos(a), r * std::sin(a))));
    }
    num += w * ring;
    mass += w * rule.angular;
  }
  return num / mass;
}

Field2 box_cutoff(std::function<double(const Point2&)> dist_to_K, double eps) {
  if (!(eps > 0.0)) throw ValidationError("cutoff radius must be positive");
  return [d = std::move(dist_to_K), eps](const Point2& p) {
    const double x = (eps - d(p)) / (0.5 * eps);
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
  };
}

double meridian_arc_distance(double s0, double t_lo, double t_hi, const Point2& p) {
  const Eigen::Vector3d x = embed(p);
  const Eigen::Vector3d u(std::cos(s0), std::sin(s0), 0.0), z(0.0, 0.0, 1.0);
  const Eigen::Vector3d n(-std::sin(s0), std::cos(s0), 0.0);
  const double tp = std::atan2(x.dot(z), x.dot(u));
  if (tp >= t_lo && tp <= t_hi) return std::asin(std::min(1.0, std::abs(x.dot(n))));
  auto arc = [&](double t) {
    const Eigen::Vector3d e = std::cos(t) * u + std::sin(t) * z;
    return std::atan2(x.cross(e).norm(), x.dot(e));
  };
  return std::min(arc(t_lo), arc(t_hi));
}

Field2 blend(Field2 smooth, Field2 rough, Field2 j) {
  return [smooth = std::move(smooth), rough = std::move(rough),
          j = std::move(j)](const Point2& p) {
    const double w = j(p);
    if (w == 0.0) return rough(p);
    if (w == 1.0) return smooth(p);
    return w * smooth(p) + (1.0 - w) * rough(p);
  };
}

ConcavityProbe second_difference_probe(const SectionGeometry& geom, const Field2& f,
                                       const std::vector<Point2>& points, double step,
                                       int directions, double tol) {
  ConcavityProbe pr;
  pr.max_second = -INFINITY;
  for (const Point2& p : points) {
    const double f0 = f(p);
    for (int k = 0; k < directions; ++k) {
      const double a = kPi * k / directions;
      const Point2 v(step * std::cos(a), step * std::sin(a));
      const double d = (f(geom.exp(p, v)) + f(geom.exp(p, -v)) - 2.0 * f0) / (step * step);
      pr.max_second = std::max(pr.max_second, d);
      if (!(d < -tol)) ++pr.violations;
      ++pr.probes;
    }
  }
  return pr;
}

GreeneWuResult greene_wu_smooth(const SectionGeometry& geom, const Field2& psi,
                                std::function<double(const Point2&)> dist_to_K,
                                double eps, const std::vector<double>& widths,
                                const std::vector<Point2>& probes,
                                GreeneWuOptions options) {
  if (widths.empty() || probes.empty()) {
    throw ValidationError("smoothing needs a width ladder and probe points");
  }
  const ConcavityProbe pre =
      second_difference_probe(geom, psi, probes, 0.5 * eps, options.directions);
  if (pre.violations > 0) {
    throw ValidationError("input is not strictly concave on the smoothing region");
  }
  const Field2 j = box_cutoff(dist_to_K, eps);
  std::vector<Point2> annulus;
  for (const Point2& p : probes) {
    const double d = dist_to_K(p);
    if (d >= 0.5 * eps && d <= eps) annulus.push_back(p);
  }
  GreeneWuResult out;
  for (double w : widths) {
    Field2 smooth = [geom, psi, w, rule = options.rule](const Point2& p) {
      return riemannian_convolution(geom, psi, p, w, rule);
    };
    Field2 phi = blend(smooth, psi, j);
    GreeneWuLevel lv;
    lv.width = w;
    lv.probe = second_difference_probe(geom, phi, probes, options.step_fraction * w,
                                       options.directions);
    for (const Point2& p : annulus) {
      lv.deviation = std::max(lv.deviation, std::abs(smooth(p) - psi(p)));
    }
    lv.concave = lv.probe.violations == 0;
    out.levels.push_back(lv);
    out.smoothed = phi;
    if (lv.concave && out.first_concave < 0) {
      out.first_concave = static_cast<int>(out.levels.size()) - 1;
      break;
    }
  }
  return out;
}

}  // namespace orbsmooth
