#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>

#include "orbsmooth/chart.hpp"
#include "orbsmooth/embedding.hpp"
#include "orbsmooth/error.hpp"
#include "orbsmooth/eta.hpp"
#include "orbsmooth/gh.hpp"
#include "orbsmooth/gluing.hpp"
#include "orbsmooth/io.hpp"
#include "orbsmooth/quotient.hpp"

namespace orbsmooth::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSchemaVersion = 1;

void emit_json(const std::optional<std::string>& path, const Json& j) {
  if (path) {
    write_json(*path, j);
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

void emit_csv(const std::optional<std::string>& path, const CsvTable& t) {
  if (path) {
    write_csv(*path, t);
  } else {
    std::cout << t.str();
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_tau(double tau) {
  if (!(tau > 0.0 && tau < kPi / 4.0)) throw ValidationError("τ must lie in (0, π/4)");
}

Json attempts_json(const LadderResult& L) {
  Json arr = Json::array();
  for (const auto& a : L.attempts) {
    Json j{{"delta", a.delta}, {"built", a.built}};
    if (a.built) {
      j["min_curvature"] = a.sweep.min_curvature;
      j["argmin"] = a.sweep.argmin;
    } else {
      j["failure"] = a.failure;
    }
    arr.push_back(j);
  }
  return arr;
}

// ---------------------------------------------------------------- verify

struct Check {
  std::string name;
  std::string kind;  // "oracle", "claim" or "control"
  double value = 0.0;
  std::string relation;  // "<=" or ">="
  double bound = 0.0;
  bool pass = false;
};

class Suite {
 public:
  void at_most(std::string name, std::string kind, double value, double bound) {
    add(std::move(name), std::move(kind), value, "<=", bound, value <= bound);
  }
  void at_least(std::string name, std::string kind, double value, double bound) {
    add(std::move(name), std::move(kind), value, ">=", bound, value >= bound);
  }
  // Passes when `body` throws ValidationError.
  void refused(std::string name, const std::function<void()>& body) {
    bool ok = false;
    try {
      body();
    } catch (const ValidationError&) {
      ok = true;
    }
    add(std::move(name), "control", ok ? 1.0 : 0.0, ">=", 1.0, ok);
  }
  const std::vector<Check>& checks() const { return checks_; }

 private:
  void add(std::string name, std::string kind, double value, const char* rel, double bound,
           bool pass) {
    checks_.push_back({std::move(name), std::move(kind), value, rel, bound, pass});
  }
  std::vector<Check> checks_;
};

void suite_oracle(Suite& s, unsigned) {
  bool sign_ok = true;
  try {
    verify_sign_convention();
  } catch (const std::exception&) {
    sign_ok = false;
  }
  s.at_least("round sphere sign convention", "oracle", sign_ok ? 1.0 : 0.0, 1.0);

  const auto hopf = make_quotient_profile(1, 1);
  const ChartMetric chart = warped2d_chart(hopf.R);
  double worst = 0.0;
  for (int i = 1; i < 32; ++i) {
    const double th = kPi / 2.0 * i / 32.0;
    worst = std::max(worst, std::abs(min_sectional_curvature(chart, make_point({th, 1.0})) - 4.0));
  }
  s.at_most("Hopf quotient chart curvature vs 4", "oracle", worst, 1e-4);

  const ChartMetric zk = zk_directions_metric(3);
  double sym = 0.0, sec = 0.0;
  for (double r : {0.4, 1.1, 2.0}) {
    const Vec p = make_point({r, 1.0});
    sym = std::max(sym, riemann_symmetry_violation(riemann(zk, p)));
    sec = std::max(sec, std::abs(min_sectional_curvature(zk, p) - 1.0));
  }
  s.at_most("Z_3 directions: Riemann symmetries", "oracle", sym, 1e-6);
  s.at_most("Z_3 directions: curvature 1", "oracle", sec, 1e-4);
}

void suite_quotient(Suite& s, unsigned) {
  double hopf = 0.0;
  for (int i = 0; i < 2048; ++i) {
    const double th = kPi / 2.0 * (i + 0.5) / 2048.0;
    hopf = std::max(hopf, std::abs(quotient_curvature(1, 1, th) - 4.0));
  }
  s.at_most("Hopf closed-form curvature vs 4", "claim", hopf, 1e-10);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 4}, {2, 5}}) {
    const auto P = make_quotient_profile(a, b);
    const std::string tag = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    s.at_most("R(0), R(π/2) " + tag, "claim",
              std::max(std::abs(P.R(0.0)), std::abs(P.R(kPi / 2.0))), 0.0);
    s.at_most("R'(0) = 1/m₋ " + tag, "claim", std::abs(P.R.derivative(1, 0.0) - 1.0 / a), 1e-10);
    s.at_most("|R'(π/2)| = 1/m₊ " + tag, "claim",
              std::abs(std::abs(P.R.derivative(1, kPi / 2.0)) - 1.0 / b), 1e-10);
    s.at_least("curvature gap ≥ 0 " + tag, "claim", curvature_gap(a, b).gap, 0.0);
  }
  s.refused("non-coprime weights (2,4)", [] { validate_weights(2, 4); });
}

void suite_resolver(Suite& s, unsigned) {
  for (double tau : {0.1, 0.2, 0.3}) {
    for (double delta : {1e-1, 1e-2, 1e-3}) {
      const EtaFunction eta = build_eta({tau, delta, 0.5, 0.0});
      double worst = INFINITY;
      for (const auto& p : eta.certificate.properties) worst = std::min(worst, p.margin);
      char name[64];
      std::snprintf(name, sizeof name, "η certificate τ=%g δ=%g: min margin", tau, delta);
      s.at_least(name, "claim", worst, 0.0);
    }
  }
  const auto L = find_delta_witness(make_quotient_profile(2, 3), 0.3, {1e-1, 1e-2, 1e-3}, 1.01);
  s.at_least("(2,3) τ=0.3 resolved min curvature", "claim",
             L.found ? L.sweep.min_curvature : -INFINITY, 1.01);
  if (L.found) {
    s.at_most("(2,3) resolved tip slope", "claim",
              std::abs(tip_check(L.resolved, 1e-6).slope - 1.0), 1e-10);
  }
  s.refused("τ = 0 refused", [] { build_eta({0.0, 0.1, 0.5, 0.0}); });
  s.refused("τ = π/4 refused", [] { build_eta({kPi / 4.0, 0.1, 0.5, 0.0}); });
}

void suite_gluing(Suite& s, unsigned) {
  for (double eps : {0.2, 0.1, 0.05}) {
    const CutoffFunction c = build_cutoff(eps);
    char name[64];
    std::snprintf(name, sizeof name, "cutoff ε=%g: sup |xφ'| margin", eps);
    s.at_least(name, "claim", c.margin_d1, 0.0);
    std::snprintf(name, sizeof name, "cutoff ε=%g: sup |x²φ''| margin", eps);
    s.at_least(name, "claim", c.margin_d2, 0.0);
  }
  const BlendStudy b = axis_pair_blend_study(stereographic_axis_pair(1.0), 0.1);
  s.at_least("axis blend ε=0.1: min curvature", "claim", b.min_curvature, 0.9);
  s.at_most("axis blend: exact vs finite differences", "oracle", b.fd_max_gap, 1e-4);
  s.refused("degree-2 shear (no first-order agreement)", [] {
    const AxisPair p = stereographic_axis_pair(1.0, 2);
    blend_difference(p.g, p.difference, p.dist_to_N, build_cutoff(0.1), p.axis_points);
  });
}

void suite_embedding(Suite& s, unsigned seed) {
  std::vector<RevolutionMetric> corpus = {space_form_sphere(2.0), space_form_sphere(4.0),
                                          spindle(2)};
  for (const auto& g : corpus) {
    const auto rep = inspect_revolution(g);
    s.at_most(g.label + ": R'² + R²", "claim", rep.max_energy, 1.0 + 1e-10);
    const auto c = solve_embedding_ode(g, 1e-4);
    s.at_most(g.label + ": pullback residual", "claim", pullback_check(g, c), 1e-8);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  Eigen::VectorXd centre(4);
  centre << 0.5, 0.5, 0.5, 0.5;
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Eigen::VectorXd q(4);
    for (int k = 0; k < 4; ++k) q(k) = N(rng);
    q.normalize();
    if (q.dot(centre) < 0.0) q = -q;
    if (q.dot(centre) < 1e-3) continue;
    worst = std::max(worst, (beltrami_inverse(centre, beltrami(centre, q)) - q).norm());
  }
  s.at_most("central projection round trip", "oracle", worst, 1e-12);
  const auto f = convex_mollify([](double x) { return x; }, 8, 0.5);
  s.at_most("mollified cone: midpoint convexity", "claim",
            radial_midpoint_convexity(f, 0.5, 1.0, 100000, seed).worst, 1e-12);
  s.refused("round sphere (d = π) refused", [] { solve_embedding_ode(space_form_sphere(1.0)); });
}

void suite_gh(Suite& s, unsigned) {
  const ProfileFunction S2(0.0, kPi, [](double r) { return sin(Jet4::variable(r)); }, 4);
  const auto X = surface_distances(S2, kPi, {64, 8});
  s.at_most("round S²: tip distance vs π", "oracle", std::abs(X.dist(0, 1) - kPi), 2e-2);
  s.at_most("round S²: triangle inequality", "claim", X.triangle_violation(), 1e-9);
  s.at_most("identical spaces: bound", "control", gh_upper_bound(X, X), 0.0);
  const auto H = surface_distances(make_quotient_profile(1, 1).R, kPi / 2.0, {64, 8});
  s.at_most("Hopf quotient: tip distance vs π/2", "claim", std::abs(H.dist(0, 1) - kPi / 2.0),
            2e-2);
}

using SuiteFn = void (*)(Suite&, unsigned);
const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> s = {
      {"oracle", suite_oracle},     {"quotient", suite_quotient},
      {"resolver", suite_resolver}, {"gluing", suite_gluing},
      {"embedding", suite_embedding}, {"gh", suite_gh},
  };
  return s;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : suites()) out.push_back(name);
  out.push_back("all");
  return out;
}

int cmd_profile(const ProfileArgs& a) {
  if (a.grid < 2) throw ValidationError("grid must be at least 2");
  const auto P = make_quotient_profile(a.m_minus, a.m_plus, a.sheets);
  CsvTable t;
  t.header = {"theta", "R", "dR", "d2R", "sec"};
  for (int i = 0; i <= a.grid; ++i) {
    const double th = kPi / 2.0 * i / a.grid;
    const auto d = P.R.derivatives(th);
    t.add_row({th, d[0], d[1], d[2], quotient_curvature_closed(a.m_minus, a.m_plus, th)});
  }
  emit_csv(a.out, t);
  return kExitOk;
}

int cmd_resolve(const ResolveArgs& a) {
  require_tau(a.tau);
  if (a.grid < 2) throw ValidationError("grid must be at least 2");
  const auto ladder = parse_number_list(a.deltas);
  const int sheets = a.branched ? 2 : 1;
  const auto P = make_quotient_profile(a.m_minus, a.m_plus, sheets);
  const auto t0 = std::chrono::steady_clock::now();
  const auto L = find_delta_witness(P, a.tau, ladder, a.threshold);
  Json j{{"command", "resolve"},
         {"schema_version", kSchemaVersion},
         {"m_minus", a.m_minus},
         {"m_plus", a.m_plus},
         {"sheets", sheets},
         {"weight", P.resolving_weight()},
         {"tau", a.tau},
         {"threshold", a.threshold},
         {"found", L.found},
         {"attempts", attempts_json(L)}};
  if (L.found) {
    const TipReport tip = tip_check(L.resolved, 1e-6);
    j["delta"] = L.delta;
    j["min_curvature"] = L.sweep.min_curvature;
    j["argmin"] = L.sweep.argmin;
    j["tip"] = {{"value", tip.value}, {"slope", tip.slope}, {"second", tip.second},
                {"fourth", tip.fourth}, {"step", tip.step}};
    Json cert = Json::array();
    for (const auto& p : L.eta.certificate.properties) {
      cert.push_back({{"name", p.name}, {"margin", p.margin}, {"pass", p.pass}});
    }
    j["eta_certificate"] = cert;
    CsvTable t;
    t.header = {"theta", "R", "eta", "resolved", "curvature"};
    for (int i = 1; i < a.grid; ++i) {
      const double th = kPi / 2.0 * i / a.grid;
      const double r = L.resolved(th);
      t.add_row({th, P.R(th), L.eta.eta(th), r, -L.resolved.derivative(2, th) / r});
    }
    if (a.out.csv) write_csv(*a.out.csv, t);
  }
  j["seconds"] = seconds_since(t0);
  emit_json(a.out.json, j);
  if (!L.found) {
    std::cerr << "no δ witness in the ladder; margins (min curvature − threshold):";
    for (const auto& at : L.attempts) {
      std::cerr << " δ=" << format_double(at.delta) << ": "
                << (at.built ? format_double(at.sweep.min_curvature - a.threshold) : at.failure);
    }
    std::cerr << "\n";
    return kExitNoWitness;
  }
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a) {
  if (a.suite.empty()) {
    for (const auto& n : suite_names()) std::cout << n << "\n";
    return kExitOk;
  }
  std::vector<std::pair<std::string, SuiteFn>> run;
  for (const auto& s : suites()) {
    if (a.suite == "all" || a.suite == s.first) run.push_back(s);
  }
  if (run.empty()) {
    throw ValidationError("unknown suite '" + a.suite + "'; run verify without a name to list");
  }
  const auto t0 = std::chrono::steady_clock::now();
  Json checks = Json::array();
  bool pass = true, oracle_failed = false;
  for (const auto& [name, fn] : run) {
    Suite s;
    fn(s, a.seed);
    for (const auto& c : s.checks()) {
      checks.push_back({{"suite", name},
                        {"name", c.name},
                        {"kind", c.kind},
                        {"value", c.value},
                        {"relation", c.relation},
                        {"bound", c.bound},
                        {"pass", c.pass}});
      pass = pass && c.pass;
      oracle_failed = oracle_failed || (!c.pass && c.kind == "oracle");
    }
  }
  Json j{{"command", "verify"},  {"schema_version", kSchemaVersion}, {"suite", a.suite},
         {"seed", a.seed},       {"pass", pass},                     {"checks", checks},
         {"seconds", seconds_since(t0)}};
  emit_json(a.out, j);
  if (pass) return kExitOk;
  return oracle_failed ? kExitOracle : kExitNoWitness;
}

int cmd_gh(const GhArgs& a) {
  const auto taus = parse_number_list(a.taus);
  for (double t : taus) require_tau(t);
  const auto ladder = parse_number_list(a.deltas);
  Json warnings = Json::array();
  if (a.grid < 32) {
    const std::string w = "coarse grid n = " + std::to_string(a.grid) +
                          " < 32: bounds are dominated by discretization error";
    std::cerr << "warning: " << w << "\n";
    warnings.push_back(w);
  }
  const auto st = convergence_study(a.m_minus, a.m_plus, taus, ladder, {a.grid, a.stride});
  Json rows = Json::array();
  CsvTable t;
  t.header = {"tau", "delta", "witness", "gh_bound", "min_curvature"};
  for (const auto& r : st.rows) {
    rows.push_back({{"tau", r.tau},
                    {"delta", r.delta},
                    {"witness", r.witness},
                    {"gh_bound", r.gh_bound},
                    {"min_curvature", r.min_curvature}});
    t.add_row({r.tau, r.delta, static_cast<long long>(r.witness), r.gh_bound, r.min_curvature});
  }
  Json j{{"command", "gh"},       {"schema_version", kSchemaVersion},
         {"m_minus", a.m_minus},  {"m_plus", a.m_plus},
         {"grid", a.grid},        {"stride", a.stride},
         {"base_self", st.base_self}, {"decreasing", st.decreasing},
         {"rows", rows},          {"warnings", warnings},
         {"seconds", st.seconds}};
  if (a.out.csv) write_csv(*a.out.csv, t);
  emit_json(a.out.json, j);
  for (const auto& r : st.rows) {
    if (!r.witness) return kExitNoWitness;
  }
  return kExitOk;
}

int cmd_embed(const EmbedArgs& a) {
  RevolutionMetric g;
  if (a.profile == "sphere") {
    g = space_form_sphere(a.kappa);
  } else if (a.profile == "spindle") {
    g = spindle(a.k);
  } else if (a.profile == "hopf") {
    g.d = kPi / 2.0;
    g.R = make_quotient_profile(1, 1).R;
    g.label = "hopf";
  } else if (a.profile == "resolved") {
    require_tau(a.tau);
    const auto L = find_delta_witness(make_quotient_profile(a.m_minus, a.m_plus), a.tau,
                                      parse_number_list(a.deltas), 1.0);
    if (!L.found) throw WitnessNotFound("no δ witness for the resolved profile");
    g.d = kPi / 2.0;
    g.R = L.resolved;
    g.label = "resolved";
  } else {
    throw ValidationError("unknown profile '" + a.profile +
                          "' (expected sphere, spindle, hopf or resolved)");
  }
  if (a.stride < 1) throw ValidationError("stride must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = inspect_revolution(g);
  const auto c = solve_embedding_ode(g, a.step);
  const double residual = pullback_check(g, c);
  const auto imm = immersion_check(g, c);
  Json j{{"command", "embed"},
         {"schema_version", kSchemaVersion},
         {"profile", g.label},
         {"d", g.d},
         {"step", c.step},
         {"sup_R", rep.sup_R},
         {"max_energy", rep.max_energy},
         {"min_curvature", rep.min_curvature},
         {"tip_slopes", {rep.tip_slope0, rep.tip_slope1}},
         {"v_end", c.v.back()},
         {"clamped", c.clamped},
         {"pullback_residual", residual},
         {"min_singular", imm.min_singular},
         {"immersed", imm.immersed},
         {"seconds", seconds_since(t0)}};
  if (a.out.csv) {
    CsvTable t;
    t.header = {"r", "R", "v", "pullback_residual"};
    for (size_t i = 0; i < c.r.size(); i += a.stride) {
      const double R = g.R(c.r[i]), R1 = g.R.derivative(1, c.r[i]);
      const double vp = c.slope_at_node(static_cast<int>(i)), q = 1.0 - R * R;
      t.add_row({c.r[i], R, c.v[i], std::abs(vp * vp * q + R1 * R1 / q - 1.0)});
    }
    write_csv(*a.out.csv, t);
  }
  emit_json(a.out.json, j);
  return kExitOk;
}

int cmd_blend(const BlendArgs& a) {
  const AxisPair pair = stereographic_axis_pair(a.shear, a.degree);
  const BlendStudy b = axis_pair_blend_study(pair, a.eps, a.radii);
  Json j{{"command", "blend"},
         {"schema_version", kSchemaVersion},
         {"shear", a.shear},
         {"degree", a.degree},
         {"eps", b.eps},
         {"log_delta", b.log_delta},
         {"min_curvature", b.min_curvature},
         {"min_at_distance", b.min_at_distance},
         {"input_min", b.input_min},
         {"points", b.points},
         {"fd_max_gap", b.fd_max_gap},
         {"fd_points", b.fd_points}};
  emit_json(a.out, j);
  return kExitOk;
}

}  // namespace orbsmooth::cli
