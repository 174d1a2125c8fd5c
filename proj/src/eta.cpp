#include "orbsmooth/eta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "orbsmooth/error.hpp"
#include "orbsmooth/quadrature.hpp"
#include "orbsmooth/smoothstep.hpp"

namespace orbsmooth {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kLobePanels = 512;
constexpr int kWindowPanels = 32;
constexpr int kNodes = 8;

// Shape data shared by the profile closures.
struct EtaState {
  double tau = 0, w = 0, eps = 0, kappa = 2.0, A = 0, n = 1;
  double s = 0, mu = 0, a = 0, b = 0, c = 0;
  std::vector<double> lobe_cum;    // H at panel starts of [τ/3, τ]
  std::vector<double> window_cum;  // η at panel starts of [a, b]

  // h = H′: cos(x+ε) up to τ/3, bridge to a ramp, negative lobe, 0 from τ.
  template <int N>
  Jet<N> h(const Jet<N>& x) const {
    const double t3 = tau / 3.0, t2 = tau / 2.0;
    if (x.c[0] <= t3) return cos(x + eps);
    if (x.c[0] >= tau) return Jet<N>();
    const Jet<N> su = smoothstep((x - t3) / (tau / 6.0));
    const Jet<N> sv = smoothstep((x - t2) / t2);
    const Jet<N> ramp = (t2 - x) * kappa;
    Jet<N> upper = ((1.0 - su) * cos(x + eps) + su * ramp) * (1.0 - sv);
    return upper - bump01((x - t2) / t2) * A;
  }
  double hv(double x) const { return h(Jet<0>(x)).c[0]; }

  double H(double x) const {
    const double t3 = tau / 3.0;
    if (x <= t3) return std::sin(x + eps);
    if (x >= tau) return 0.0;
    const double width = (tau - t3) / kLobePanels;
    const int k = std::min(kLobePanels - 1, int((x - t3) / width));
    const double x0 = t3 + k * width;
    return lobe_cum[k] + partial(x0, x, [this](double y) { return hv(y); });
  }

  template <class F>
  static double partial(double x0, double x1, F f) {
    if (x1 <= x0) return 0.0;
    const GaussRule& g = gauss_legendre(kNodes);
    const double half = 0.5 * (x1 - x0), mid = 0.5 * (x1 + x0);
    double sum = 0.0;
    for (int i = 0; i < kNodes; ++i) sum += g.w[i] * f(mid + half * g.x[i]);
    return half * sum;
  }

  // Corner transition inside [a, b] centred at cc, width μ.
  template <int N>
  Jet<N> nu_window(const Jet<N>& x, double cc) const {
    const Jet<N> T = smoothstep((x - cc) / mu + 0.5);
    return (1.0 - T) * cos(x) * w + T * h(x) / n;
  }

  // η′ as a jet.
  template <int N>
  Jet<N> nu(const Jet<N>& x) const {
    if (x.c[0] <= a) return cos(x) * w;
    if (x.c[0] < b) return nu_window(x, c);
    return h(x) / n;
  }

  double window_integral(double cc) const {
    return integrate([&](double y) { return nu_window(Jet<0>(y), cc).c[0]; }, a, b,
                     kWindowPanels, kNodes);
  }

  double value(double x) const {
    if (x <= a) {
      if (x < -a) {
        throw DomainError("η continuation is only defined on [−τ(δ), π/2]");
      }
      return w * std::sin(x);
    }
    if (x < b) {
      const double width = (b - a) / kWindowPanels;
      const int k = std::min(kWindowPanels - 1, int((x - a) / width));
      const double x0 = a + k * width;
      return window_cum[k] +
             partial(x0, x, [this](double y) { return nu_window(Jet<0>(y), c).c[0]; });
    }
    return H(x) / n;
  }

  Jet4 jet(double x) const {
    Jet4 j;
    if (x <= a) {
      if (x < -a) throw DomainError("η continuation is only defined on [−τ(δ), π/2]");
      Jet4 v = sin(Jet4::variable(x)) * w;
      return v;
    }
    const Jet<1> d = nu(Jet<1>::variable(x));
    j.c[0] = value(x);
    j.c[1] = d.c[0];
    j.c[2] = 0.5 * d.c[1];
    return j;
  }
};

}  // namespace

void SmoothingParams::validate() const {
  if (!(tau > 0.0 && tau < std::numbers::pi / 4.0)) {
    throw ValidationError("τ must lie in (0, π/4)");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("δ must be positive");
  if (!(weight > 0.0 && weight < 1.0)) throw ValidationError("weight must lie in (0, 1)");
}

EtaFunction build_eta(SmoothingParams params) {
  params.validate();
  auto st = std::make_shared<EtaState>();
  const double tau = params.tau, w = params.weight;
  st->tau = tau;
  st->w = w;
  st->eps = tau / 4.0;
  const double t3 = tau / 3.0, t2 = tau / 2.0;

  // Lobe amplitude from ∫_{−ε}^{τ} h = 0, using the same panels as H.
  const double width = (tau - t3) / kLobePanels;
  std::vector<double> upper(kLobePanels), lobe(kLobePanels);
  st->A = 0.0;
  for (int k = 0; k < kLobePanels; ++k) {
    const double x0 = t3 + k * width, x1 = x0 + width;
    upper[k] = EtaState::partial(x0, x1, [&](double y) { return st->hv(y); });
    lobe[k] = EtaState::partial(x0, x1, [&](double y) { return bump01((y - t2) / t2); });
  }
  double sum_upper = std::sin(t3 + st->eps), sum_lobe = 0.0;
  for (int k = 0; k < kLobePanels; ++k) {
    sum_upper += upper[k];
    sum_lobe += lobe[k];
  }
  st->A = sum_upper / sum_lobe;
  st->lobe_cum.assign(kLobePanels + 1, 0.0);
  st->lobe_cum[0] = std::sin(t3 + st->eps);
  for (int k = 0; k < kLobePanels; ++k) {
    st->lobe_cum[k + 1] = st->lobe_cum[k] + upper[k] - st->A * lobe[k];
  }

  // C² size of H on [τ/3, τ] fixes the scale n.
  double M = 0.0;
  const int samples = 8192;
  for (int i = 0; i <= samples; ++i) {
    const double x = t3 + (tau - t3) * i / samples;
    const Jet<1> hj = st->h(Jet<1>::variable(x));
    M = std::max(M, std::abs(st->H(x)) + std::abs(hj.c[0]) + std::abs(hj.c[1]));
  }
  M *= 1.05;
  const double n_small = 2.0 * M / params.delta;
  const double n_cross =
      (std::sin(st->eps) / std::tan(0.9 * t3) + std::cos(st->eps)) / w;
  st->n = std::max(n_small, n_cross);

  st->s = std::atan(std::sin(st->eps) / (st->n * w - std::cos(st->eps)));
  st->mu = std::min(st->s, t3 - st->s) / 10.0;
  st->a = st->s - st->mu;
  st->b = st->s + st->mu;
  if (!(st->a > 0.0) || !(st->b < t3)) {
    throw WitnessNotFound("η construction infeasible: corner window leaves (0, τ/3)");
  }

  // Transition centre so that η meets H/n at the window's right end.
  const double target = st->H(st->b) / st->n - w * std::sin(st->a);
  double lo = st->s - 0.5 * st->mu, hi = st->s + 0.5 * st->mu;
  double flo = st->window_integral(lo) - target;
  double fhi = st->window_integral(hi) - target;
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw WitnessNotFound("η construction infeasible: corner transition not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = st->window_integral(mid) - target;
    if (fm < 0.0) lo = mid;
    else hi = mid;
  }
  st->c = 0.5 * (lo + hi);

  st->window_cum.assign(kWindowPanels + 1, 0.0);
  st->window_cum[0] = w * std::sin(st->a);
  const double ww = (st->b - st->a) / kWindowPanels;
  for (int k = 0; k < kWindowPanels; ++k) {
    const double x0 = st->a + k * ww;
    st->window_cum[k + 1] =
        st->window_cum[k] + EtaState::partial(x0, x0 + ww, [&](double y) {
          return st->nu_window(Jet<0>(y), st->c).c[0];
        });
  }

  EtaFunction out;
  params.tau_of_delta = st->a;
  out.params = params;
  out.eta = ProfileFunction(0.0, kHalfPi, [st](double x) { return st->jet(x); }, 2);
  out.construction = {st->eps, st->kappa, st->A, st->n, st->s, st->mu, st->c};
  out.certificate = verify_eta(out);
  if (!out.certificate.valid) {
    std::string failed;
    for (const auto& p : out.certificate.properties) {
      if (!p.pass) failed += (failed.empty() ? "" : ", ") + p.name;
    }
    throw WitnessNotFound("η construction failed verification: " + failed);
  }
  return out;
}

EtaFunction trivial_eta(double tau) {
  EtaFunction out;
  out.params.tau = tau;
  out.params.delta = 0.0;
  out.params.weight = 0.0;
  out.params.tau_of_delta = tau / 4.0;
  out.eta = ProfileFunction(0.0, kHalfPi, [](double) { return Jet4(); }, 4);
  out.certificate = verify_eta(out);
  return out;
}

EtaCertificate verify_eta(const EtaFunction& e, int grid) {
  const auto& p = e.params;
  const auto& f = e.eta;
  const double tau = p.tau, w = p.weight;
  constexpr double tol_eq = 1e-12, tol_ratio = 1e-9;
  auto pts = [grid](double lo, double hi, bool open_lo, bool open_hi) {
    std::vector<double> xs;
    const int denom = grid - 1 + int(open_lo) + int(open_hi);
    for (int i = 0; i < grid; ++i) xs.push_back(lo + (hi - lo) * (i + int(open_lo)) / denom);
    return xs;
  };
  EtaCertificate cert;
  cert.grid = grid;
  auto add = [&](const char* name, double margin) {
    cert.properties.push_back({name, margin, margin > 0.0});
  };

  double dev = 0.0;
  for (double x : pts(0.0, p.tau_of_delta, false, false)) {
    dev = std::max(dev, std::abs(f(x) - w * std::sin(x)));
  }
  add("(i) eta = w sin on [0, tau(delta)]", tol_eq - dev);

  double mn = INFINITY;
  for (double x : pts(0.0, tau / 2.0, true, true)) mn = std::min(mn, f.derivative(1, x));
  add("(ii) eta' > 0 on (0, tau/2)", mn);

  double mx = 0.0;
  for (double x : pts(tau / 2.0, kHalfPi, false, false)) mx = std::max(mx, f.derivative(1, x));
  add("(iii) eta' <= 0 on [tau/2, pi/2]", tol_eq - mx);

  dev = 0.0;
  for (double x : pts(tau, kHalfPi, false, false)) {
    const Jet4 j = f.jet(x);
    dev = std::max({dev, std::abs(j.c[0]), std::abs(j.c[1]), std::abs(j.c[2])});
  }
  add("(iv) eta = 0 on [tau, pi/2]", tol_eq - dev);

  double worst = 0.0;
  for (double x : pts(0.0, tau / 2.0, true, false)) {
    const Jet4 j = f.jet(x);
    const double v = j.c[0];
    if (!(v > 0.0)) {
      worst = INFINITY;
      break;
    }
    worst = std::max(worst, 2.0 * j.c[2] / v + 1.0);
  }
  add("(v) eta''/eta <= -1 on (0, tau/2]", tol_ratio - worst);

  mx = 0.0;
  for (double x : pts(tau / 3.0, kHalfPi, false, false)) {
    const Jet4 j = f.jet(x);
    mx = std::max(mx, std::abs(j.c[0]) + std::abs(j.c[1]) + 2.0 * std::abs(j.c[2]));
  }
  add("(vi) |eta|+|eta'|+|eta''| < delta on [tau/3, pi/2]", p.delta - mx);

  double lo = 0.0, hi = 0.0;
  for (double x : pts(0.0, kHalfPi, false, false)) {
    const double v = f(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  add("0 <= eta <= delta", std::min(tol_eq + lo, p.delta - hi));

  cert.valid = std::all_of(cert.properties.begin(), cert.properties.end(),
                           [](const PropertyCheck& c) { return c.pass; });
  return cert;
}

ProfileFunction resolved_profile(const WeightedQuotientProfile& R, const EtaFunction& eta) {
  const double need = R.resolving_weight();
  if (std::abs(eta.params.weight - need) > 1e-12) {
    throw ValidationError("η weight " + std::to_string(eta.params.weight) +
                          " does not match the tip weight " + std::to_string(need));
  }
  if (need == 0.0) return R.R;
  return R.R + eta.eta;
}

TipReport tip_check(const ProfileFunction& f, double step) {
  TipReport t;
  t.step = step;
  t.value = f(0.0);
  t.slope = f.derivative(1, 0.0);
  const double h = step;
  const double f0 = f(0.0), f1 = f(h), fm1 = f(-h), f2 = f(2 * h), fm2 = f(-2 * h);
  t.second = (f1 - 2.0 * f0 + fm1) / (h * h);
  t.fourth = (f2 - 4.0 * f1 + 6.0 * f0 - 4.0 * fm1 + fm2) / (h * h * h * h);
  return t;
}

SweepResult resolved_curvature_sweep(const ProfileFunction& f, double tau, int grid) {
  SweepResult r;
  r.min_curvature = INFINITY;
  auto visit = [&](double x) {
    const Jet4 j = f.jet(x);
    if (!(j.c[0] > 0.0)) throw DomainError("resolved profile must be positive on (0, π/2)");
    const double k = -2.0 * j.c[2] / j.c[0];
    if (k < r.min_curvature) {
      r.min_curvature = k;
      r.argmin = x;
    }
  };
  for (int i = 1; i <= grid; ++i) visit(kHalfPi * i / (grid + 1));
  for (int i = 1; i <= grid; ++i) visit(tau * i / grid);
  return r;
}

LadderResult find_delta_witness(const WeightedQuotientProfile& R, double tau,
                                const std::vector<double>& ladder, double threshold) {
  LadderResult out;
  for (double delta : ladder) {
    LadderAttempt at;
    at.delta = delta;
    try {
      EtaFunction eta = R.resolving_weight() == 0.0
                            ? trivial_eta(tau)
                            : build_eta({tau, delta, R.resolving_weight(), 0.0});
      ProfileFunction res = resolved_profile(R, eta);
      at.sweep = resolved_curvature_sweep(res, tau);
      at.built = true;
      out.attempts.push_back(at);
      if (at.sweep.min_curvature >= threshold) {
        out.found = true;
        out.delta = delta;
        out.eta = std::move(eta);
        out.resolved = std::move(res);
        out.sweep = at.sweep;
        return out;
      }
    } catch (const WitnessNotFound& e) {
      at.failure = e.what();
      out.attempts.push_back(at);
    }
  }
  return out;
}

}  // namespace orbsmooth
