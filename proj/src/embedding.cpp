#include "orbsmooth/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <random>

#include "orbsmooth/error.hpp"
#include "orbsmooth/greene_wu.hpp"
#include "orbsmooth/quadrature.hpp"
#include "orbsmooth/smoothstep.hpp"

namespace orbsmooth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClamp = 1e-12;

double sup_profile(const RevolutionMetric& g, int grid) {
  double s = 0.0;
  for (int i = 0; i <= grid; ++i) s = std::max(s, g.R(g.d * i / grid));
  return s;
}

double integrand(const RevolutionMetric& g, double r, int& clamped) {
  double rad = embedding_radicand(g, r);
  if (rad < 0.0) {
    if (rad < -kClamp) {
      throw ValidationError("embedding radicand 1 - R^2 - R'^2 is negative at r = " +
                            std::to_string(r) + "; the profile violates R'^2 + R^2 <= 1");
    }
    rad = 0.0;
    ++clamped;
  }
  const double R = g.R(r);
  return std::sqrt(rad) / (1.0 - R * R);
}

}  // namespace

RevolutionReport inspect_revolution(const RevolutionMetric& g, int grid) {
  RevolutionReport rep;
  rep.min_curvature = INFINITY;
  for (int i = 0; i <= grid; ++i) {
    const double r = g.d * i / grid;
    const double R = g.R(r), R1 = g.R.derivative(1, r);
    rep.sup_R = std::max(rep.sup_R, R);
    rep.max_energy = std::max(rep.max_energy, R1 * R1 + R * R);
    if (i > 0 && i < grid && R > 0.0) {
      rep.min_curvature = std::min(rep.min_curvature, -g.R.derivative(2, r) / R);
    }
  }
  rep.tip_slope0 = g.R.derivative(1, 0.0);
  rep.tip_slope1 = -g.R.derivative(1, g.d);
  rep.curvature_ok = rep.min_curvature >= 1.0 - 1e-8;
  rep.energy_ok = rep.max_energy <= 1.0 + 1e-10;
  return rep;
}

RevolutionMetric space_form_sphere(double kappa) {
  if (!(kappa >= 1.0)) throw ValidationError("space-form sphere needs kappa >= 1");
  const double a = std::sqrt(kappa);
  RevolutionMetric g;
  g.d = kPi / a;
  g.R = ProfileFunction(0.0, g.d, [a](double r) { return sin(a * Jet4::variable(r)) / a; }, 4);
  char label[48];
  std::snprintf(label, sizeof label, "space_form_%g", kappa);
  g.label = label;
  return g;
}

RevolutionMetric spindle(int k) {
  if (k < 1) throw ValidationError("spindle order must be positive");
  RevolutionMetric g;
  g.d = kPi;
  g.R = ProfileFunction(0.0, kPi, [k](double r) { return sin(Jet4::variable(r)) / double(k); },
                        4);
  g.label = "spindle_" + std::to_string(k);
  return g;
}

double EmbeddingCurve::value(double x) const {
  if (r.empty()) throw DomainError("empty embedding curve");
  const int n = static_cast<int>(r.size()) - 1;
  const double h = d / n;
  int i = std::clamp(static_cast<int>(std::floor(x / h)), 0, n - 1);
  const double s = (x - r[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * v[i] + h10 * h * dv[i] + h01 * v[i + 1] + h11 * h * dv[i + 1];
}

double EmbeddingCurve::slope_at_node(int i) const {
  const int n = static_cast<int>(v.size()) - 1;
  if (n < 4) throw DomainError("curve too short for fourth-order differences");
  const double h = d / n;
  if (i >= 2 && i <= n - 2) {
    return (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
  }
  // one-sided five-point formulas
  static constexpr double fwd[2][5] = {{-25, 48, -36, 16, -3}, {-3, -10, 18, -6, 1}};
  const bool left = i < 2;
  const int row = left ? i : n - i;
  const double sign = left ? 1.0 : -1.0;
  double s = 0.0;
  // row 0 uses offsets 0..4, row 1 uses −1..3, mirrored at the right end
  for (int k = 0; k < 5; ++k) {
    const int off = k - row;
    s += fwd[row][k] * v[left ? i + off : i - off];
  }
  return sign * s / (12.0 * h);
}

double embedding_radicand(const RevolutionMetric& g, double r) {
  const double R = g.R(r), R1 = g.R.derivative(1, r);
  return 1.0 - R * R - R1 * R1;
}

EmbeddingCurve solve_embedding_ode(const RevolutionMetric& g, double step) {
  if (!(g.d > 0.0 && g.d <= kPi + 1e-12)) {
    throw ValidationError("tip distance must lie in (0, pi]");
  }
  if (!(step > 0.0)) throw ValidationError("ODE step must be positive");
  if (sup_profile(g, 4096) >= 1.0 - 1e-12) {
    throw ValidationError(
        "sup R >= 1: tip distance pi with a round profile is the rigid case; the sphere "
        "is a great sphere and needs no surface of revolution");
  }
  const int n = std::max(4, static_cast<int>(std::ceil(g.d / step - 1e-9)));
  const double h = g.d / n;
  EmbeddingCurve c;
  c.d = g.d;
  c.step = h;
  c.r.resize(n + 1);
  c.v.resize(n + 1);
  c.dv.resize(n + 1);
  c.r[0] = 0.0;
  c.v[0] = 0.0;
  c.dv[0] = integrand(g, 0.0, c.clamped);
  for (int i = 0; i < n; ++i) {
    const double r0 = h * i;
    const double mid = integrand(g, r0 + 0.5 * h, c.clamped);
    const double r1 = i + 1 == n ? g.d : h * (i + 1);
    const double f1 = integrand(g, r1, c.clamped);
    // k2 = k3 since the field depends on r only
    c.v[i + 1] = c.v[i] + h / 6.0 * (c.dv[i] + 4.0 * mid + f1);
    c.r[i + 1] = r1;
    c.dv[i + 1] = f1;
  }
  return c;
}

double pullback_check(const RevolutionMetric& g, const EmbeddingCurve& curve) {
  double worst = 0.0;
  for (size_t i = 0; i < curve.v.size(); ++i) {
    const double r = curve.r[i];
    const double R = g.R(r), R1 = g.R.derivative(1, r);
    const double vp = curve.slope_at_node(static_cast<int>(i));
    const double q = 1.0 - R * R;
    worst = std::max(worst, std::abs(vp * vp * q + R1 * R1 / q - 1.0));
  }
  return worst;
}

EmbeddingCurve scaled_curve(const EmbeddingCurve& curve, double factor) {
  EmbeddingCurve c = curve;
  for (double& x : c.v) x *= factor;
  for (double& x : c.dv) x *= factor;
  return c;
}

Eigen::Vector4d surface_point(const RevolutionMetric& g, const EmbeddingCurve& curve,
                              double r, double theta) {
  const double R = g.R(r), c = std::sqrt(std::max(0.0, 1.0 - R * R));
  const double v = curve.value(r);
  return {c * std::cos(v), c * std::sin(v), R * std::cos(theta), R * std::sin(theta)};
}

ImmersionReport immersion_check(const RevolutionMetric& g, const EmbeddingCurve& curve,
                                int n) {
  ImmersionReport rep;
  rep.min_singular = INFINITY;
  int clamped = 0;
  for (int i = 1; i < n; ++i) {
    const double r = g.d * i / n;
    const double R = g.R(r), R1 = g.R.derivative(1, r);
    const double c = std::sqrt(1.0 - R * R), c1 = -R * R1 / c;
    const double v = curve.value(r), v1 = integrand(g, r, clamped);
    for (int k = 0; k < 8; ++k) {
      const double th = 2.0 * kPi * k / 8;
      Eigen::Matrix<double, 4, 2> J;
      J.col(0) << c1 * std::cos(v) - c * std::sin(v) * v1, c1 * std::sin(v) + c * std::cos(v) * v1,
          R1 * std::cos(th), R1 * std::sin(th);
      // ∂_θ scaled by 1/R so the polar degeneracy does not count
      J.col(1) << 0.0, 0.0, -std::sin(th), std::cos(th);
      const Eigen::Matrix2d gram = J.transpose() * J;
      const double smin = std::sqrt(std::max(0.0, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(gram).eigenvalues()(0)));
      rep.min_singular = std::min(rep.min_singular, smin);
      ++rep.points;
    }
  }
  rep.immersed = rep.min_singular > 1e-6;
  return rep;
}

Eigen::VectorXd beltrami(const Eigen::VectorXd& c, const Eigen::VectorXd& q) {
  if (c.size() != q.size()) throw ValidationError("dimension mismatch in central projection");
  const double a = q.dot(c);
  if (!(a > 0.0)) throw ValidationError("point lies outside the open hemisphere");
  return q / a;
}

Eigen::VectorXd beltrami_inverse(const Eigen::VectorXd& c, const Eigen::VectorXd& x) {
  if (c.size() != x.size()) throw ValidationError("dimension mismatch in central projection");
  if (std::abs(x.dot(c) - 1.0) > 1e-9) {
    throw ValidationError("point does not lie on the tangent plane");
  }
  return x / x.norm();
}

RadialProfile radial_mollify(const RadialProfile& F, int n, MollifyOptions options) {
  if (n < 1) throw ValidationError("mollifier index must be positive");
  const double width = 1.0 / n;
  const GaussRule& gr = gauss_legendre(options.radial_nodes);
  std::vector<double> rho, W;
  double mass = 0.0;
  for (int i = 0; i < options.radial_nodes; ++i) {
    const double p = 0.5 * width * (gr.x[i] + 1.0);
    const double w = gr.w[i] * p * p * mollifier_profile(p / width);
    rho.push_back(p);
    W.push_back(w);
    mass += w;
  }
  for (double& w : W) w /= mass;
  const int chord = options.chord_nodes;
  return [F, rho, W, chord](double s) {
    const GaussRule& gc = gauss_legendre(chord);
    s = std::abs(s);
    double total = 0.0;
    for (size_t i = 0; i < rho.size(); ++i) {
      const double p = rho[i];
      double shell;
      if (s == 0.0) {
        shell = F(p);
      } else {
        // ½∫F(|x − y|)dμ = (2sρ)⁻¹ ∫_{|s−ρ|}^{s+ρ} F(t) t dt
        const double a = std::abs(s - p), b = s + p;
        double acc = 0.0;
        for (int k = 0; k < chord; ++k) {
          const double t = 0.5 * (a + b) + 0.5 * (b - a) * gc.x[k];
          acc += gc.w[k] * F(t) * t;
        }
        shell = acc * 0.5 * (b - a) / (2.0 * s * p);
      }
      total += W[i] * shell;
    }
    return total;
  };
}

RadialProfile convex_mollify(const RadialProfile& F, int n, double r,
                             MollifyOptions options) {
  if (!(r > 0.0)) throw ValidationError("blend radius must be positive");
  const int grid = 2048;
  const double h = 2.0 * r / grid;
  double scale = 0.0;
  for (int i = 0; i <= grid; ++i) scale = std::max(scale, std::abs(F(i * h)));
  const double tol = 1e-12 * std::max(1.0, scale);
  if (F(h) < F(0.0) - tol) throw ValidationError("radial profile decreases at the origin");
  for (int i = 1; i < grid; ++i) {
    if (F((i + 1) * h) - 2.0 * F(i * h) + F((i - 1) * h) < -tol) {
      throw ValidationError("radial profile is not convex");
    }
  }
  RadialProfile Fn = radial_mollify(F, n, options);
  return [F, Fn, r](double s) {
    s = std::abs(s);
    const double j = smoothstep((r - s) / (0.5 * r));
    if (j == 0.0) return F(s);
    if (j == 1.0) return Fn(s);
    return j * Fn(s) + (1.0 - j) * F(s);
  };
}

ConvexityCheck radial_midpoint_convexity(const RadialProfile& F, double r, double extent,
                                         int trials, unsigned seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto ball = [&](double rad) {
    Eigen::Vector3d x;
    do {
      x = Eigen::Vector3d(U(rng), U(rng), U(rng));
    } while (x.squaredNorm() > 1.0);
    return Eigen::Vector3d(rad * x);
  };
  ConvexityCheck out;
  out.worst = -INFINITY;
  while (out.trials < trials) {
    const Eigen::Vector3d a = ball(extent), b = a + ball(0.5 * extent);
    const Eigen::Vector3d d = b - a;
    const double t = std::clamp(-a.dot(d) / d.squaredNorm(), 0.0, 1.0);
    const double lo = (a + t * d).norm(), hi = std::max(a.norm(), b.norm());
    if (!(hi < 0.5 * r || lo > r)) continue;
    const double mid = F((0.5 * (a + b)).norm());
    out.worst = std::max(out.worst, mid - 0.5 * (F(a.norm()) + F(b.norm())));
    ++out.trials;
  }
  out.pass = out.worst <= tol;
  return out;
}

ConeGraph cone_from_tip(const RevolutionMetric& g, double step) {
  ConeGraph cone;
  const double sup = sup_profile(g, 4096);
  if (sup >= 1.0 - 1e-12 && std::abs(g.d - kPi) < 1e-9) {
    cone.flat = true;
    cone.centre = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);
    cone.f = [](const Eigen::Vector3d&) { return 0.0; };
    return cone;
  }
  auto curve = std::make_shared<EmbeddingCurve>(solve_embedding_ode(g, step));
  const double vc = 0.5 * curve->v.back();
  if (!(vc < 0.5 * kPi + 1e-9)) {
    throw ValidationError("embedded sphere is not contained in a closed hemisphere");
  }
  cone.centre = Eigen::Vector4d(std::cos(vc), std::sin(vc), 0.0, 0.0);
  const double tip_slope = std::cos(vc) / std::sin(vc);
  auto R = g.R;
  const double d = g.d;
  cone.f = [curve, R, d, vc, tip_slope](const Eigen::Vector3d& x) {
    const double rho = std::hypot(x(1), x(2));
    if (rho == 0.0) return std::abs(x(0)) * tip_slope;
    const double target = x(0) / rho;
    auto q = [&](double r) {
      const double Rr = R(r);
      return std::sqrt(1.0 - Rr * Rr) * std::sin(curve->value(r) - vc) / Rr;
    };
    double lo = 0.0, hi = d;
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (lo + hi);
      if (q(m) < target) lo = m; else hi = m;
    }
    const double r = 0.5 * (lo + hi), Rr = R(r);
    return rho * std::sqrt(1.0 - Rr * Rr) * std::cos(curve->value(r) - vc) / Rr;
  };
  cone.slope_min = INFINITY;
  cone.slope_max = -INFINITY;
  const int m = 400;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < m; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / m, s = std::sqrt(1.0 - z * z);
    const Eigen::Vector3d w(z, s * std::cos(golden * i), s * std::sin(golden * i));
    const double f = cone.f(w);
    cone.slope_min = std::min(cone.slope_min, f);
    cone.slope_max = std::max(cone.slope_max, f);
  }
  return cone;
}

}  // namespace orbsmooth
