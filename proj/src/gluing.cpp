#include "orbsmooth/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "orbsmooth/error.hpp"
#include "orbsmooth/smoothstep.hpp"

namespace orbsmooth {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

double cutoff_constant() {
  // |xφ′| = S′ε/K and |x²φ″| ≤ S″ε²/K² + S′ε/K, so K² ≥ S′K + S″ suffices.
  static const double K = [] {
    const double a = smoothstep_max_d1(), b = smoothstep_max_d2();
    return 0.5 * (a + std::sqrt(a * a + 4.0 * b));
  }();
  return K;
}

double CutoffFunction::operator()(double x) const { return phi(x); }

std::array<double, 3> CutoffFunction::scaled_derivatives(double log_x) const {
  const double L = std::log(eps) - log_delta;
  const double u = (std::log(eps) - log_x) / L;
  const Jet<2> s = smoothstep(Jet<2>::variable(u));
  const double s1 = s.deriv(1), s2 = s.deriv(2);
  return {s.c[0], -s1 / L, s2 / (L * L) + s1 / L};
}

Jet<2> CutoffFunction::jet(double x) const {
  if (x <= 0.0 || std::log(x) <= log_delta) return Jet<2>(1.0);
  if (x >= eps) return Jet<2>(0.0);
  const auto d = scaled_derivatives(std::log(x));
  Jet<2> j(d[0]);
  j.c[1] = d[1] / x;
  j.c[2] = 0.5 * d[2] / (x * x);
  return j;
}

CutoffFunction build_cutoff(double eps, int grid_points) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("cutoff needs eps in (0, 1)");
  if (grid_points < 2) throw ValidationError("cutoff grid needs at least 2 points");
  CutoffFunction c;
  c.eps = eps;
  c.K = cutoff_constant();
  c.log_delta = std::log(eps) - c.K / eps;
  c.delta = std::exp(c.log_delta);
  const double log_eps = std::log(eps), L = c.K / eps, log_delta = c.log_delta;
  c.phi = ProfileFunction(
      0.0, std::numeric_limits<double>::max(),
      [log_eps, log_delta, L](double x) {
        if (x <= 0.0 || std::log(x) <= log_delta) return Jet4(1.0);
        if (x >= std::exp(log_eps)) return Jet4(0.0);
        return smoothstep((log_eps - log(Jet4::variable(x))) / L);
      },
      4);
  c.grid_points = grid_points;
  for (int i = 0; i < grid_points; ++i) {
    const double lx = log_delta + (log_eps - log_delta) * i / (grid_points - 1);
    const auto d = c.scaled_derivatives(lx);
    c.sup_x_d1 = std::max(c.sup_x_d1, std::abs(d[1]));
    c.sup_x2_d2 = std::max(c.sup_x2_d2, std::abs(d[2]));
  }
  c.margin_d1 = eps - c.sup_x_d1;
  c.margin_d2 = eps - c.sup_x2_d2;
  return c;
}

Hyper cutoff_of(const CutoffFunction& cutoff, const Hyper& d) {
  if (d.v <= 0.0 || std::log(d.v) <= cutoff.log_delta) return Hyper(1.0);
  if (d.v >= cutoff.eps) return Hyper(0.0);
  return Hyper::chain(d, cutoff.jet(d.v));
}

FirstOrderGap first_order_gap(const ChartMetric& g, const ChartMetric& g_tilde,
                              const std::vector<Vec>& points) {
  constexpr double h = 1e-5;
  FirstOrderGap gap;
  auto diff = [&](const Vec& p) { return Mat(g_tilde(p) - g(p)); };
  for (const Vec& p : points) {
    gap.value = std::max(gap.value, max_abs(diff(p)));
    for (int i = 0; i < p.size(); ++i) {
      Vec a = p, b = p;
      a(i) += h;
      b(i) -= h;
      gap.derivative = std::max(gap.derivative, max_abs((diff(a) - diff(b)) / (2.0 * h)));
    }
    ++gap.points;
  }
  return gap;
}

FirstOrderGap first_order_gap(const HyperMetric& g, const HyperMetric& g_tilde,
                              const std::vector<Vec>& points) {
  FirstOrderGap gap;
  for (const Vec& p : points) {
    const MetricDerivatives a = g.derivatives(p), b = g_tilde.derivatives(p);
    gap.value = std::max(gap.value, max_abs(b.g - a.g));
    for (int i = 0; i < 3; ++i) {
      gap.derivative = std::max(gap.derivative, max_abs(b.dg[i] - a.dg[i]));
    }
    ++gap.points;
  }
  return gap;
}

namespace {

void require_agreement(const FirstOrderGap& gap, double tol) {
  if (gap.points == 0) throw ValidationError("blend needs at least one point on N");
  if (gap.value > tol || gap.derivative > tol) {
    throw ValidationError("metrics do not agree to first order on N (value gap " +
                          std::to_string(gap.value) + ", derivative gap " +
                          std::to_string(gap.derivative) + ")");
  }
}

}  // namespace

ChartMetric blend_metrics(const ChartMetric& g, const ChartMetric& g_tilde,
                          ScalarField dist_to_N, const CutoffFunction& cutoff,
                          const std::vector<Vec>& axis_points, double tol_match) {
  if (g.dim() != g_tilde.dim()) throw ValidationError("metrics differ in dimension");
  require_agreement(first_order_gap(g, g_tilde, axis_points), tol_match);
  return ChartMetric(
      g.coords(),
      [g, g_tilde, d = std::move(dist_to_N), cutoff](const Vec& p) {
        const double psi = cutoff(d(p));
        if (psi == 0.0) return g(p);
        if (psi == 1.0) return g_tilde(p);
        return Mat(psi * g_tilde(p) + (1.0 - psi) * g(p));
      },
      g.h_fd());
}

HyperMetric blend_metrics(const HyperMetric& g, const HyperMetric& g_tilde,
                          HyperScalar dist_to_N, const CutoffFunction& cutoff,
                          const std::vector<Vec>& axis_points, double tol_match) {
  HyperMetric::Fn diff = [g, g_tilde](const HyperPoint& x) {
    const HyperMat a = g(x), b = g_tilde(x);
    HyperMat d;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d[i][j] = b[i][j] - a[i][j];
    return d;
  };
  return blend_difference(g, diff, std::move(dist_to_N), cutoff, axis_points, tol_match);
}

HyperMetric blend_difference(const HyperMetric& g, HyperMetric::Fn difference,
                             HyperScalar dist_to_N, const CutoffFunction& cutoff,
                             const std::vector<Vec>& axis_points, double tol_match) {
  FirstOrderGap gap;
  for (const Vec& p : axis_points) {
    const HyperMat d = difference({Hyper::variable(p(0), 0), Hyper::variable(p(1), 1),
                                   Hyper::variable(p(2), 2)});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        gap.value = std::max(gap.value, std::abs(d[i][j].v));
        gap.derivative = std::max(gap.derivative, d[i][j].d.cwiseAbs().maxCoeff());
      }
    ++gap.points;
  }
  require_agreement(gap, tol_match);
  return HyperMetric(g.coords(), [g, D = std::move(difference), d = std::move(dist_to_N),
                                  cutoff](const HyperPoint& x) {
    const Hyper psi = cutoff_of(cutoff, d(x));
    HyperMat h = g(x);
    if (psi.v == 0.0 && psi.d.isZero() && psi.H.isZero()) return h;
    const HyperMat diff = D(x);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h[i][j] = h[i][j] + psi * diff[i][j];
    return h;
  });
}

namespace {

// sin²(√w)/w (sinh² for w < 0) and (1 − that)/w, as jets in w.
// Power series a_k = (−1)^k 2^{2k+1}/(2k+2)! near 0.
void sinc2_jets(double w, Jet<2>& S, Jet<2>& T) {
  if (std::abs(w) <= 1.0) {
    double s[3] = {0, 0, 0}, t[3] = {0, 0, 0};
    double a = 1.0;  // a_0
    for (int k = 0; k < 30; ++k) {
      const double wk = std::pow(w, k);
      const double wk1 = k >= 1 ? std::pow(w, k - 1) : 0.0;
      const double wk2 = k >= 2 ? std::pow(w, k - 2) : 0.0;
      s[0] += a * wk;
      s[1] += k * a * wk1;
      s[2] += k * (k - 1) * a * wk2;
      // next coefficient
      const double next = -a * 4.0 / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
      t[0] -= next * wk;
      t[1] -= k * next * wk1;
      t[2] -= k * (k - 1) * next * wk2;
      a = next;
    }
    S = Jet<2>(s[0]);
    S.c[1] = s[1];
    S.c[2] = 0.5 * s[2];
    T = Jet<2>(t[0]);
    T.c[1] = t[1];
    T.c[2] = 0.5 * t[2];
    return;
  }
  const Jet<2> W = Jet<2>::variable(w);
  if (w > 0.0) {
    S = (1.0 - cos(2.0 * sqrt(W))) / (2.0 * W);
  } else {
    const Jet<2> r = sqrt(-W);
    S = (exp(2.0 * r) + exp(-2.0 * r) - 2.0) / (-4.0 * W);
  }
  T = (1.0 - S) / W;
}

}  // namespace

HyperMetric space_form_normal(double kappa, double half_width) {
  if (!(half_width > 0.0)) throw ValidationError("chart half-width must be positive");
  if (kappa > 0.0 && !(std::sqrt(3.0) * half_width < kPi / std::sqrt(kappa))) {
    throw ValidationError("normal-coordinate box exceeds the injectivity radius");
  }
  std::vector<CoordRange> coords = {{"x", -half_width, half_width},
                                    {"y", -half_width, half_width},
                                    {"z", -half_width, half_width}};
  return HyperMetric(coords, [kappa](const HyperPoint& x) {
    const Hyper u = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    Jet<2> S, T;
    sinc2_jets(kappa * u.v, S, T);
    const double k2 = kappa * kappa;
    const Hyper F = Hyper::chain(u, S.c[0], kappa * S.c[1], 2.0 * k2 * S.c[2]);
    const Hyper G =
        Hyper::chain(u, kappa * T.c[0], k2 * T.c[1], 2.0 * k2 * kappa * T.c[2]);
    HyperMat g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g[i][j] = G * x[i] * x[j] + (i == j ? F : Hyper(0.0));
    return g;
  });
}

namespace {

// Jets in u of F₂ − F₁ and G₂ − G₁ for the space forms κ₁, κ₂.
void space_form_gap_jets(double k1, double k2, double u, Jet<2>& dF, Jet<2>& dG) {
  if (std::max(std::abs(k1), std::abs(k2)) * std::abs(u) > 1.0) {
    Jet<2> S1, T1, S2, T2;
    sinc2_jets(k1 * u, S1, T1);
    sinc2_jets(k2 * u, S2, T2);
    for (int i = 0; i <= 2; ++i) {
      const double p1 = std::pow(k1, i), p2 = std::pow(k2, i);
      dF.c[i] = p2 * S2.c[i] - p1 * S1.c[i];
      dG.c[i] = p2 * k2 * T2.c[i] - p1 * k1 * T1.c[i];
    }
    return;
  }
  double f[3] = {0, 0, 0}, g[3] = {0, 0, 0};
  double a = 1.0;
  for (int k = 0; k < 30; ++k) {
    const double next = -a * 4.0 / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
    const double cf = a * (std::pow(k2, k) - std::pow(k1, k));
    const double cg = -next * (std::pow(k2, k + 1) - std::pow(k1, k + 1));
    const double uk = std::pow(u, k);
    const double uk1 = k >= 1 ? std::pow(u, k - 1) : 0.0;
    const double uk2 = k >= 2 ? std::pow(u, k - 2) : 0.0;
    f[0] += cf * uk;
    f[1] += k * cf * uk1;
    f[2] += 0.5 * k * (k - 1) * cf * uk2;
    g[0] += cg * uk;
    g[1] += k * cg * uk1;
    g[2] += 0.5 * k * (k - 1) * cg * uk2;
    a = next;
  }
  for (int i = 0; i <= 2; ++i) {
    dF.c[i] = f[i];
    dG.c[i] = g[i];
  }
}

}  // namespace

HyperMetric::Fn space_form_difference(double kappa1, double kappa2) {
  return [kappa1, kappa2](const HyperPoint& x) {
    const Hyper u = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    Jet<2> dF, dG;
    space_form_gap_jets(kappa1, kappa2, u.v, dF, dG);
    const Hyper F = Hyper::chain(u, dF), G = Hyper::chain(u, dG);
    HyperMat d;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d[i][j] = G * x[i] * x[j] + (i == j ? F : Hyper(0.0));
    return d;
  };
}

HyperMetric constant_curvature_cap(const HyperMetric& g_normal, double kappa,
                                   double lower_bound, const CutoffFunction& cutoff,
                                   HyperMetric::Fn model_minus_g) {
  if (kappa < lower_bound) {
    throw ValidationError("cap curvature must be at least the lower bound of g");
  }
  for (const CoordRange& c : g_normal.coords()) {
    if (!(c.lo < -cutoff.eps && c.hi > cutoff.eps)) {
      throw ValidationError("chart too small for the cap tube");
    }
  }
  const Vec origin = make_point({0.0, 0.0, 0.0});
  const MetricDerivatives d = g_normal.derivatives(origin);
  double first = 0.0;
  for (int i = 0; i < 3; ++i) first = std::max(first, max_abs(d.dg[i]));
  if (max_abs(d.g - Mat::Identity(3, 3)) > kTolMatchClosed || first > kTolMatchClosed) {
    throw ValidationError("metric is not in normal coordinates at the cap centre");
  }
  double half_width = cutoff.eps;
  for (const CoordRange& c : g_normal.coords()) {
    half_width = std::max({half_width, -c.lo, c.hi});
  }
  if (kappa > 0.0) {
    half_width = std::min(half_width, 0.999 * kPi / (std::sqrt(3.0 * kappa)));
  }
  const HyperMetric model = space_form_normal(kappa, half_width);
  HyperScalar dist = [](const HyperPoint& x) {
    const Hyper u = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (u.v == 0.0) return Hyper(0.0);
    return sqrt(u);
  };
  if (model_minus_g) {
    return blend_difference(g_normal, std::move(model_minus_g), dist, cutoff, {origin});
  }
  return blend_metrics(g_normal, model, dist, cutoff, {origin});
}

AxisPair stereographic_axis_pair(double shear, int shear_degree, double half_width) {
  if (shear_degree != 2 && shear_degree != 3) {
    throw ValidationError("shear degree must be 2 or 3");
  }
  if (!(half_width > 0.0 && half_width < 1.0)) {
    throw ValidationError("axis-pair half-width must lie in (0, 1)");
  }
  const double a = shear;
  const bool cubic = shear_degree == 3;
  std::vector<CoordRange> coords = {{"x", -half_width, half_width},
                                    {"y", -half_width, half_width},
                                    {"z", -half_width, half_width}};
  // c and its gradient
  auto shear_fn = [cubic](const HyperPoint& x, Hyper& c, Hyper& cx, Hyper& cy) {
    if (cubic) {
      c = x[0] * x[0] * x[0] - 3.0 * x[0] * x[1] * x[1];
      cx = 3.0 * x[0] * x[0] - 3.0 * x[1] * x[1];
      cy = -6.0 * x[0] * x[1];
    } else {
      c = x[0] * x[0] - x[1] * x[1];
      cx = 2.0 * x[0];
      cy = -2.0 * x[1];
    }
  };
  auto conformal = [](const Hyper& s) {
    const Hyper q = 1.0 + s;
    return 4.0 / (q * q);
  };
  auto sq = [](const HyperPoint& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };

  AxisPair P;
  P.shear = a;
  P.g = HyperMetric(coords, [conformal, sq](const HyperPoint& x) {
    const Hyper l = conformal(sq(x));
    HyperMat g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g[i][j] = i == j ? l : Hyper(0.0);
    return g;
  });
  // D = λ(Φ)(DΦᵀDΦ − I) + (λ(Φ) − λ) I, DΦᵀDΦ − I = a(∇c e₃ᵀ + e₃∇cᵀ) + a²∇c∇cᵀ.
  P.difference = [a, shear_fn, sq](const HyperPoint& x) {
    Hyper c, cx, cy;
    shear_fn(x, c, cx, cy);
    const Hyper s = sq(x);
    const Hyper w = 2.0 * a * x[2] * c + a * a * c * c;  // |Φ|² − |x|²
    const Hyper q = 1.0 + s, qw = q + w;
    const Hyper lam_phi = 4.0 / (qw * qw);
    const Hyper dlam = -4.0 * w * (2.0 * q + w) / (q * q * qw * qw);
    const Hyper grad[3] = {cx, cy, Hyper(0.0)};
    HyperMat d;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Hyper m = a * a * grad[i] * grad[j];
        if (j == 2) m = m + a * grad[i];
        if (i == 2) m = m + a * grad[j];
        d[i][j] = lam_phi * m + (i == j ? dlam : Hyper(0.0));
      }
    return d;
  };
  P.g_tilde = HyperMetric(coords, [g = P.g, D = P.difference](const HyperPoint& x) {
    HyperMat m = g(x);
    const HyperMat d = D(x);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = m[i][j] + d[i][j];
    return m;
  });
  P.dist_to_N = [sq](const HyperPoint& x) {
    const Hyper q = 1.0 + sq(x);
    const Hyper u = 4.0 * (x[0] * x[0] + x[1] * x[1]) / (q * q);
    if (u.v == 0.0) return Hyper(0.0);
    return asin(sqrt(u));
  };
  for (int k = 0; k < 5; ++k) {
    P.axis_points.push_back(make_point({0.0, 0.0, -0.4 + 0.2 * k}));
  }
  return P;
}

Vec axis_pair_point(double d, double z, double omega) {
  const double s = std::sin(d), q = 1.0 + z * z;
  const double rho = s * q / (1.0 + std::sqrt(1.0 - s * s * q));
  return make_point({rho * std::cos(omega), rho * std::sin(omega), z});
}

BlendStudy axis_pair_blend_study(const AxisPair& pair, double eps, int radii) {
  if (radii < 2) throw ValidationError("blend sweep needs at least two radii");
  const CutoffFunction cut = build_cutoff(eps);
  const HyperMetric h = blend_difference(pair.g, pair.difference, pair.dist_to_N, cut,
                                         pair.axis_points);
  const ChartMetric oracle = h.chart();
  BlendStudy st;
  st.eps = eps;
  st.log_delta = cut.log_delta;
  st.min_curvature = INFINITY;
  st.input_min = INFINITY;
  const double lo = cut.log_delta - 1.0, hi = std::log(1.2 * eps);
  for (int i = 0; i < radii; ++i) {
    const double d = std::exp(lo + (hi - lo) * i / (radii - 1));
    for (double z : {-0.3, 0.0, 0.2, 0.4})
      for (int k = 0; k < 6; ++k) {
        const Vec p = axis_pair_point(d, z, 0.4 + k * kPi / 3.0);
        const double kh = min_sectional_exact(h, p);
        if (kh < st.min_curvature) {
          st.min_curvature = kh;
          st.min_at_distance = d;
        }
        st.input_min = std::min({st.input_min, min_sectional_exact(pair.g, p),
                                 min_sectional_exact(pair.g_tilde, p)});
        ++st.points;
        if (d >= 1e-2 && k % 2 == 0) {
          st.fd_max_gap = std::max(st.fd_max_gap,
                                   std::abs(kh - min_sectional_curvature(oracle, p)));
          ++st.fd_points;
        }
      }
  }
  return st;
}

void require_circle_invariant(const ChartMetric& g, double tol) {
  if (g.dim() != 3) throw ValidationError("expected coordinates (t, r, theta)");
  const auto& c = g.coords();
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b) {
      const double t = c[0].lo + (c[0].hi - c[0].lo) * a / 6.0;
      const double r = c[1].lo + (c[1].hi - c[1].lo) * b / 6.0;
      const Mat base = g(make_point({t, r, c[2].lo}));
      for (int k = 1; k < 16; ++k) {
        const double th = c[2].lo + (c[2].hi - c[2].lo) * k / 16.0;
        const Mat m = g(make_point({t, r, th}));
        if (max_abs(m - base) > tol * (1.0 + max_abs(base))) {
          throw ValidationError("metric coefficients depend on theta");
        }
      }
    }
}

ChartMetric drop_cross_term(const ChartMetric& g) {
  require_circle_invariant(g);
  return ChartMetric(
      g.coords(),
      [g](const Vec& p) {
        Mat m = g(p);
        m(0, 2) = m(2, 0) = 0.0;
        return m;
      },
      g.h_fd());
}

ChartMetric average_circle_action(const ChartMetric& g, int nodes) {
  if (g.dim() != 3) throw ValidationError("expected an angle as the last coordinate");
  const double lo = g.coords()[2].lo, period = g.coords()[2].hi - lo;
  if (std::abs(period - 2.0 * kPi) > 1e-12) {
    throw ValidationError("angle coordinate must cover a full period");
  }
  if (nodes < 1) throw ValidationError("averaging needs at least one node");
  return ChartMetric(
      g.coords(),
      [g, nodes, lo](const Vec& p) {
        Mat sum = Mat::Zero(3, 3);
        for (int k = 0; k < nodes; ++k) {
          Vec q = p;
          q(2) = lo + std::fmod(p(2) - lo + 2.0 * kPi * k / nodes + 4.0 * kPi, 2.0 * kPi);
          sum += g(q);
        }
        return Mat(sum / nodes);
      },
      g.h_fd());
}

namespace {

Mat cartesian_at(const ChartMetric& polar, double t, double x, double y) {
  const double lo = polar.coords()[2].lo;
  const double r = std::hypot(x, y);
  double th = std::atan2(y, x);
  th = lo + std::fmod(th - lo + 4.0 * kPi, 2.0 * kPi);
  Mat J = Mat::Zero(3, 3);
  J(0, 0) = 1.0;
  J(1, 1) = x / r;
  J(1, 2) = y / r;
  J(2, 1) = -y / (r * r);
  J(2, 2) = x / (r * r);
  return J.transpose() * polar(make_point({t, r, th})) * J;
}

}  // namespace

ChartMetric polar_to_cartesian(const ChartMetric& polar) {
  if (polar.dim() != 3) throw ValidationError("expected coordinates (t, r, theta)");
  const auto& c = polar.coords();
  const double w = c[1].hi / std::sqrt(2.0);
  std::vector<CoordRange> coords = {c[0], {"x", -w, w}, {"y", -w, w}};
  return ChartMetric(
      coords,
      [polar](const Vec& p) {
        const double x = p(1), y = p(2);
        if (std::hypot(x, y) >= 1e-12) return cartesian_at(polar, p(0), x, y);
        constexpr double nu = 1e-9;
        return Mat(0.25 * (cartesian_at(polar, p(0), nu, 0.0) +
                           cartesian_at(polar, p(0), -nu, 0.0) +
                           cartesian_at(polar, p(0), 0.0, nu) +
                           cartesian_at(polar, p(0), 0.0, -nu)));
      },
      polar.h_fd());
}

AxisAgreement axis_agreement(const ChartMetric& g_polar, const ChartMetric& h_polar,
                             const std::vector<double>& t_values, double r0,
                             int levels) {
  if (levels < 2) throw ValidationError("agreement fit needs at least two radii");
  std::vector<double> lr, lg;
  AxisAgreement out;
  for (int k = 0; k < levels; ++k) {
    const double r = r0 * std::pow(2.0, -k);
    double gap = 0.0;
    for (double t : t_values)
      for (int a = 0; a < 8; ++a) {
        const double w = 2.0 * kPi * (a + 0.5) / 8.0;
        const double x = r * std::cos(w), y = r * std::sin(w);
        gap = std::max(gap, max_abs(cartesian_at(h_polar, t, x, y) -
                                    cartesian_at(g_polar, t, x, y)));
      }
    lr.push_back(std::log(r));
    lg.push_back(std::log(std::max(gap, 1e-300)));
    out.gap_small = gap;
  }
  if (out.gap_small <= 1e-14) {
    out.order = std::numeric_limits<double>::infinity();
    out.second_order = true;
    return out;
  }
  const int n = levels;
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) { mx += lr[i]; my += lg[i]; }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (lr[i] - mx) * (lg[i] - my);
    sxx += (lr[i] - mx) * (lr[i] - mx);
  }
  out.order = sxy / sxx;
  out.second_order = out.order >= 2.5;
  return out;
}

}  // namespace orbsmooth
