#include "orbsmooth/tube.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "orbsmooth/error.hpp"

namespace orbsmooth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kFdStep = 1e-4;

// θ from sin θ ∝ y, cos θ ∝ x with x ≥ 0, as a jet.
template <int N>
Jet<N> angle_jet(const Jet<N>& y, const Jet<N>& x) {
  if (x.c[0] >= std::abs(y.c[0])) return atan(y / x);
  const double side = y.c[0] > 0.0 ? kHalfPi : -kHalfPi;
  return side - atan(x / y);
}

template <int N>
void polar_jets(const Jet<N>& s, const Jet<N>& t, Jet<N>& sinr, Jet<N>& theta) {
  Jet<N> ss, cs, st, ct;
  sincos(s, ss, cs);
  sincos(t, st, ct);
  sinr = sqrt(ss * ss + cs * cs * st * st);
  theta = angle_jet(st, ct * ss);
}

void require_not_origin(double s, double t) {
  if (std::abs(s) < 1e-300 && std::abs(t) < 1e-300) {
    throw DomainError("coordinate transfer is undefined at s = t = 0");
  }
}

Jet4 suspended_jet(const ProfileFunction& base, const Jet4& s, const Jet4& t) {
  require_not_origin(s.c[0], t.c[0]);
  Jet4 sinr, theta;
  polar_jets(s, t, sinr, theta);
  const Jet4 b = base.jet(theta.c[0]);
  std::array<double, 5> d{};
  for (int k = 0; k <= 4; ++k) d[k] = b.deriv(k);
  return sinr * compose<4>(d, theta);
}

Jet4 fd_jet(const std::function<double(double)>& g, double x) {
  const double h = kFdStep;
  const double f0 = g(x), fp = g(x + h), fm = g(x - h);
  Jet4 j(f0);
  j.c[1] = (fp - fm) / (2.0 * h);
  j.c[2] = 0.5 * (fp - 2.0 * f0 + fm) / (h * h);
  return j;
}

}  // namespace

Transfer coordinate_transfer(double s, double t) {
  require_not_origin(s, t);
  if (!(s >= 0.0 && s < kPi) || !(t >= 0.0 && t < kHalfPi)) {
    throw DomainError("coordinate transfer needs s ∈ [0,π), t ∈ [0,π/2)");
  }
  const double ss = std::sin(s), cs = std::cos(s), st = std::sin(t), ct = std::cos(t);
  const double sinr = std::sqrt(ss * ss + cs * cs * st * st);
  Transfer x;
  x.r = std::atan2(sinr, cs * ct);
  x.theta = std::atan2(st, ct * ss);
  const double s2 = sinr * sinr;
  x.dr_ds = ss * ct / sinr;
  x.dr_dt = cs * st / sinr;
  x.dtheta_ds = -st * ct * cs / s2;
  x.dtheta_dt = ss / s2;
  return x;
}

double transfer_residual(double s, double t) {
  const Transfer x = coordinate_transfer(s, t);
  const double r1 = std::abs(std::cos(x.r) - std::cos(s) * std::cos(t));
  const double r2 = std::abs(std::sin(t) - std::sin(x.r) * std::sin(x.theta));
  const double r3 =
      std::abs(std::cos(x.theta) * std::sin(x.r) - std::cos(t) * std::sin(s));
  return std::max({r1, r2, r3});
}

MonotonicityReport monotonicity_check(double rho, double T, int n, std::uint64_t seed) {
  if (!(rho > 0.0 && rho < kHalfPi) || !(T > 0.0 && T < kHalfPi) || n < 2) {
    throw ValidationError("monotonicity check needs ρ, T ∈ (0, π/2) and n ≥ 2");
  }
  MonotonicityReport rep;
  for (double& m : rep.min_margin) m = INFINITY;
  for (int i = 1; i <= n; ++i) {
    const double s = rho * i / (n + 1);
    for (int j = 1; j <= n; ++j) {
      const double t = T * j / (n + 1);
      const Transfer x = coordinate_transfer(s, t);
      const double cr = std::cos(x.r);
      const double v[4] = {cr * x.dr_ds, cr * x.dr_dt, x.dtheta_dt, -x.dtheta_ds};
      for (int k = 0; k < 4; ++k) {
        rep.min_margin[k] = std::min(rep.min_margin[k], v[k]);
        if (!(v[k] > 0.0)) ++rep.violations[k];
      }
      ++rep.points;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(0.1 * rho, 0.9 * rho), ut(0.1 * T, 0.9 * T);
  const double s = us(rng), t = ut(rng), h = 1e-6;
  const Transfer x = coordinate_transfer(s, t);
  const Transfer sp = coordinate_transfer(s + h, t), sm = coordinate_transfer(s - h, t);
  const Transfer tp = coordinate_transfer(s, t + h), tm = coordinate_transfer(s, t - h);
  rep.spot_error = std::max({std::abs((sp.r - sm.r) / (2 * h) - x.dr_ds),
                             std::abs((tp.r - tm.r) / (2 * h) - x.dr_dt),
                             std::abs((sp.theta - sm.theta) / (2 * h) - x.dtheta_ds),
                             std::abs((tp.theta - tm.theta) / (2 * h) - x.dtheta_dt)});
  rep.pass = std::all_of(std::begin(rep.violations), std::end(rep.violations),
                         [](int v) { return v == 0; });
  return rep;
}

SectionField::SectionField(Value v) : value_(std::move(v)) {}

SectionField::SectionField(Value v, PartialJet ds, PartialJet dt)
    : value_(std::move(v)), ds_(std::move(ds)), dt_(std::move(dt)) {}

Jet4 SectionField::s_jet(double s, double t) const {
  if (ds_) return ds_(s, t);
  return fd_jet([this, t](double x) { return value_(x, t); }, s);
}

Jet4 SectionField::t_jet(double s, double t) const {
  if (dt_) return dt_(s, t);
  return fd_jet([this, s](double x) { return value_(s, x); }, t);
}

SectionField operator+(const SectionField& a, const SectionField& b) {
  auto v = [a, b](double s, double t) { return a(s, t) + b(s, t); };
  if (a.has_jets() && b.has_jets()) {
    return SectionField(
        v, [a, b](double s, double t) { return a.s_jet(s, t) + b.s_jet(s, t); },
        [a, b](double s, double t) { return a.t_jet(s, t) + b.t_jet(s, t); });
  }
  return SectionField(v);
}

SectionField SectionField::reflected(double l) const {
  SectionField self = *this;
  auto v = [self, l](double s, double t) { return self(l - s, t); };
  if (!has_jets()) return SectionField(v);
  return SectionField(
      v,
      [self, l](double s, double t) {
        Jet4 j = self.s_jet(l - s, t);
        for (int k = 1; k <= 4; k += 2) j.c[k] = -j.c[k];
        return j;
      },
      [self, l](double s, double t) { return self.t_jet(l - s, t); });
}

SectionField suspended_field(const ProfileFunction& base) {
  return SectionField(
      [base](double s, double t) {
        require_not_origin(s, t);
        Jet<0> sinr, theta;
        polar_jets(Jet<0>(s), Jet<0>(t), sinr, theta);
        return sinr.c[0] * base(theta.c[0]);
      },
      [base](double s, double t) {
        return suspended_jet(base, Jet4::variable(s), Jet4(t));
      },
      [base](double s, double t) {
        return suspended_jet(base, Jet4(s), Jet4::variable(t));
      });
}

double killing_polar(const ProfileFunction& base, double r, double theta) {
  return std::sin(r) * base(theta);
}

SectionField killing_extension(const EtaFunction& eta, double rho) {
  if (!(rho > 0.0 && rho < kHalfPi)) throw ValidationError("ρ must lie in (0, π/2)");
  return suspended_field(eta.eta);
}

SectionField hbar_extension(const EtaFunction& eta, double rho) {
  const SectionField h = killing_extension(eta, rho);
  const double s0 = rho / 2.0;
  return SectionField([h, s0](double, double t) { return h(s0, t); },
                      [h, s0](double, double t) { return Jet4(h(s0, t)); },
                      [h, s0](double, double t) { return h.t_jet(s0, t); });
}

double t_at_angle(double s, double theta0) {
  return std::atan(std::tan(theta0) * std::sin(s));
}

TubeChart suspension_tube(const ProfileFunction& R, int axis_weight, double rho,
                          double T) {
  if (!(rho > 0.0 && rho < kHalfPi)) throw ValidationError("ρ must lie in (0, π/2)");
  if (axis_weight < 1) throw ValidationError("axis weight must be ≥ 1");
  if (!(T > 0.0) || std::cos(rho / 2.0) * std::cos(T) <= std::cos(rho)) {
    throw ValidationError("tube radius T must keep (ρ/2, t) inside the ρ-ball");
  }
  TubeChart tube;
  tube.length = kPi;
  tube.radius = T;
  tube.rho = rho;
  tube.axis_weight = axis_weight;
  tube.f = SectionField([](double, double t) { return std::cos(t); },
                        [](double, double t) { return Jet4(std::cos(t)); },
                        [](double, double t) { return cos(Jet4::variable(t)); });
  tube.phi = suspended_field(R);
  validate_tube(tube);
  return tube;
}

void validate_tube(const TubeChart& tube) {
  if (!(tube.length > 0.0) || !(tube.radius > 0.0)) {
    throw ValidationError("tube length and radius must be positive");
  }
  const double m = tube.axis_weight;
  for (int i = 1; i <= 15; ++i) {
    const double s = tube.length * i / 16.0;
    const double f0 = tube.f(s, 0.0);
    const Jet4 pj = tube.phi.t_jet(s, 0.0);
    if (std::abs(f0 - 1.0) > 1e-12 || std::abs(pj.c[0]) > 1e-12 ||
        std::abs(pj.c[1] - 1.0 / m) > 1e-8) {
      throw ValidationError("tube must satisfy f(s,0) = 1, φ(s,0) = 0, ∂_tφ(s,0) = 1/m");
    }
  }
}

ChartMetric section_metric(const TubeChart& tube) {
  SectionField f = tube.f;
  return ChartMetric({{"s", 0.0, tube.length}, {"t", 0.0, tube.radius}},
                     [f](const Vec& p) {
                       Mat g = Mat::Zero(2, 2);
                       const double fv = f(p(0), p(1));
                       g(0, 0) = fv * fv;
                       g(1, 1) = 1.0;
                       return g;
                     });
}

ChartMetric tube_metric(const TubeChart& tube, const SectionField& hbar) {
  SectionField f = tube.f;
  SectionField psi = tube.phi + hbar;
  return ChartMetric(
      {{"s", 0.0, tube.length}, {"t", 0.0, tube.radius}, {"alpha", 0.0, 2.0 * kPi}},
      [f, psi](const Vec& p) {
        Mat g = Mat::Zero(3, 3);
        const double fv = f(p(0), p(1)), pv = psi(p(0), p(1));
        g(0, 0) = fv * fv;
        g(1, 1) = 1.0;
        g(2, 2) = pv * pv;
        return g;
      });
}

Mat tube_frame(const TubeChart& tube, const SectionField& hbar, double s, double t) {
  const double psi = tube.phi(s, t) + hbar(s, t);
  const double f = tube.f(s, t);
  if (!(psi > 0.0) || !(f > 0.0)) throw DomainError("tube frame needs φ + h̄ > 0, f > 0");
  Mat b = Mat::Zero(3, 3);
  b(2, 0) = 1.0 / psi;
  b(1, 1) = 1.0;
  b(0, 2) = 1.0 / f;
  return b;
}

Mat hbar_hessian_formula(const TubeChart& tube, const SectionField& hbar, double s,
                         double t) {
  const Jet4 fj = tube.f.t_jet(s, t);
  const Jet4 hj = hbar.t_jet(s, t);
  Mat H = Mat::Zero(2, 2);
  H(0, 0) = fj.c[0] * hj.deriv(1) * fj.deriv(1);
  H(1, 1) = hj.deriv(2);
  return H;
}

Eigen::Matrix3d block_curvature_operator(const TubeChart& tube, const SectionField& hbar,
                                         double s, double t) {
  const SectionField psi = tube.phi + hbar;
  const Jet4 ft = tube.f.t_jet(s, t), fs = tube.f.s_jet(s, t);
  const Jet4 pt = psi.t_jet(s, t), ps = psi.s_jet(s, t);
  const double f = ft.c[0], f_t = ft.deriv(1), f_s = fs.deriv(1), f_tt = ft.deriv(2);
  const double p = pt.c[0], p_t = pt.deriv(1), p_s = ps.deriv(1);
  const double h = kFdStep;
  const double p_st =
      (psi.t_jet(s + h, t).deriv(1) - psi.t_jet(s - h, t).deriv(1)) / (2.0 * h);
  // Christoffel symbols of f² ds² + dt².
  const double G_s_ss = f_s / f, G_t_ss = -f * f_t, G_s_st = f_t / f;
  const double H_tt = pt.deriv(2);
  const double H_st = p_st - G_s_st * p_s;
  const double H_ss = ps.deriv(2) - G_s_ss * p_s - G_t_ss * p_t;
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
  B(0, 0) = -H_tt / p;
  B(0, 1) = B(1, 0) = -H_st / (f * p);
  B(1, 1) = -H_ss / (f * f * p);
  B(2, 2) = -f_tt / f;
  return B;
}

double zeta(const TubeChart& tube, const SectionField& hbar, double s, double t) {
  const double psi = tube.phi(s, t) + hbar(s, t);
  const double xi = psi * psi;
  return (xi / (t * t) - 1.0) / (t * t);
}

AxisRegularity axis_regularity(const TubeChart& tube, const SectionField& hbar, double s,
                               double step) {
  AxisRegularity a;
  a.s = s;
  const Jet4 pj = tube.phi.t_jet(s, 0.0) + hbar.t_jet(s, 0.0);
  const Jet4 xi = pj * pj;
  for (int k = 0; k <= 4; ++k) a.xi[k] = xi.c[k];
  a.zeta0 = xi.c[4];
  bool finite = std::isfinite(a.zeta0);
  for (int k = 1; k <= 64; ++k) {
    const double z = zeta(tube, hbar, s, tube.radius * k / 65.0);
    finite = finite && std::isfinite(z);
    a.zeta_max = std::max(a.zeta_max, std::abs(z));
  }
  const double h = step;
  const double z1 = zeta(tube, hbar, s, h), zm1 = zeta(tube, hbar, s, -h);
  const double z2 = zeta(tube, hbar, s, 2 * h), zm2 = zeta(tube, hbar, s, -2 * h);
  a.odd_first = (z1 - zm1) / (2.0 * h);
  a.odd_third = (z2 - 2.0 * z1 + 2.0 * zm1 - zm2) / (2.0 * h * h * h);
  a.finite = finite && std::isfinite(a.odd_first) && std::isfinite(a.odd_third);
  return a;
}

ThresholdCheck tube_threshold_check(const TubeChart& tube, double tau, double T0, int n) {
  if (!(T0 > 0.0 && T0 <= tube.radius)) throw ValidationError("T0 must lie in (0, T]");
  ThresholdCheck c;
  c.T0 = T0;
  c.max_ratio = -INFINITY;
  const double a = tube.rho / 4.0, b = tube.length - tube.rho / 4.0;
  for (int i = 0; i <= n; ++i) {
    const double s = a + (b - a) * i / n;
    for (int j = 1; j <= n; ++j) {
      const double t = T0 * j / n;
      const Jet4 fj = tube.f.t_jet(s, t);
      const double ratio = fj.deriv(1) / (fj.c[0] * tube.phi(s, t));
      c.max_ratio = std::max(c.max_ratio, ratio);
    }
  }
  c.support = t_at_angle(tube.rho / 2.0, tau);
  c.half_angle_t = t_at_angle(tube.rho / 2.0, tau / 2.0);
  c.sign_ok = c.max_ratio < 0.0;
  c.support_ok = c.support <= T0;
  return c;
}

TubeSweep tube_curvature_sweep(const TubeChart& tube, const SectionField& hbar, int ns,
                               int nt) {
  const ChartMetric g = tube_metric(tube, hbar);
  TubeSweep sw;
  sw.min_curvature = INFINITY;
  const double a = tube.rho / 4.0, b = tube.length - tube.rho / 4.0;
  for (int i = 0; i < ns; ++i) {
    const double s = a + (b - a) * i / (ns - 1);
    for (int j = 1; j <= nt; ++j) {
      const double t = tube.radius * j / (nt + 1);
      const double k = min_sectional_curvature(g, make_point({s, t, kPi}));
      ++sw.points;
      if (k < sw.min_curvature) {
        sw.min_curvature = k;
        sw.at_s = s;
        sw.at_t = t;
      }
    }
  }
  return sw;
}

MinGlue::MinGlue(SectionField phi, SectionField h, SectionField hbar, SectionField htilde,
                 double rho, double l)
    : phi_(std::move(phi)),
      h_(std::move(h)),
      hbar_(std::move(hbar)),
      htilde_(std::move(htilde)),
      rho_(rho),
      l_(l) {}

double MinGlue::operator()(double s, double t) const {
  const double base = phi_(s, t);
  if (s <= rho_ / 2.0) return base + h_(s, t);
  if (s >= l_ - rho_ / 2.0) return base + htilde_(s, t);
  return base + hbar_(s, t);
}

double MinGlue::seam_mismatch(double T, int n) const {
  double worst = 0.0;
  const double s1 = rho_ / 2.0, s2 = l_ - rho_ / 2.0;
  for (int j = 0; j <= n; ++j) {
    const double t = T * j / n;
    worst = std::max(worst, std::abs(h_(s1, t) - hbar_(s1, t)));
    worst = std::max(worst, std::abs(htilde_(s2, t) - hbar_(s2, t)));
  }
  return worst;
}

MinGlue psi_min_glue(const SectionField& phi, const SectionField& h,
                     const SectionField& hbar, const SectionField& htilde, double rho,
                     double l, double T) {
  if (!(rho > 0.0) || !(l > rho)) throw ValidationError("need 0 < ρ < l");
  MinGlue g(phi, h, hbar, htilde, rho, l);
  const double mis = g.seam_mismatch(T);
  if (mis > 1e-12) {
    throw ValidationError("pieces disagree at the seams by " + std::to_string(mis));
  }
  return g;
}

SeamScan seam_jump_scan(const MinGlue& psi, double T, int n, double threshold) {
  SeamScan sc;
  sc.t_lo = INFINITY;
  sc.t_hi = -INFINITY;
  const double s = psi.rho() / 2.0;
  for (int j = 1; j < n; ++j) {
    const double t = T * j / n;
    const double jump =
        std::abs(psi.h().s_jet(s, t).deriv(1) - psi.hbar().s_jet(s, t).deriv(1));
    sc.max_jump = std::max(sc.max_jump, jump);
    if (jump > threshold) {
      ++sc.jumps;
      sc.t_lo = std::min(sc.t_lo, t);
      sc.t_hi = std::max(sc.t_hi, t);
    }
  }
  if (sc.jumps > 0) {
    sc.theta_lo = coordinate_transfer(s, sc.t_lo).theta;
    sc.theta_hi = coordinate_transfer(s, sc.t_hi).theta;
  } else {
    sc.t_lo = sc.t_hi = 0.0;
  }
  return sc;
}

Eigen::Vector3d section_embed(double s, double t) {
  return {std::cos(t) * std::cos(s), std::cos(t) * std::sin(s), std::sin(t)};
}

void section_chart(const Eigen::Vector3d& x, double& s, double& t) {
  const Eigen::Vector3d u = x.normalized();
  t = std::asin(std::clamp(u(2), -1.0, 1.0));
  s = std::atan2(u(1), u(0));
}

ConcavityReport midpoint_concavity(const std::function<double(double, double)>& f,
                                   double rho, int trials, std::uint64_t seed,
                                   double tol) {
  ConcavityReport rep;
  rep.worst = INFINITY;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  auto sample = [&]() {
    // Area-uniform on the quarter cap r < ρ, θ ∈ [0, π/2].
    const double r = std::acos(1.0 - ur(rng) * (1.0 - std::cos(rho)));
    const double th = kHalfPi * ur(rng);
    return Eigen::Vector3d(std::cos(r), std::sin(r) * std::cos(th),
                           std::sin(r) * std::sin(th));
  };
  for (int k = 0; k < trials; ++k) {
    const Eigen::Vector3d a = sample(), b = sample();
    const Eigen::Vector3d m = (a + b).normalized();
    double sa, ta, sb, tb, sm, tm;
    section_chart(a, sa, ta);
    section_chart(b, sb, tb);
    section_chart(m, sm, tm);
    const double gap = f(sm, tm) - 0.5 * (f(sa, ta) + f(sb, tb));
    rep.worst = std::min(rep.worst, gap);
    ++rep.trials;
  }
  rep.pass = rep.worst >= -tol;
  return rep;
}

}  // namespace orbsmooth
