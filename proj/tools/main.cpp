#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "orbsmooth/error.hpp"
#include "orbsmooth/io.hpp"

using namespace orbsmooth;
using namespace orbsmooth::cli;

namespace {

// Long option names of a subcommand, without dashes.
std::vector<std::string> option_keys(const CLI::App* sub) {
  std::vector<std::string> keys;
  for (const CLI::Option* o : sub->get_options()) {
    for (const auto& n : o->get_lnames()) {
      if (n != "help" && n != "config") keys.push_back(n);
    }
  }
  return keys;
}

// Config entries become "--key value" arguments placed before the command
// line ones, so explicit flags win.
std::vector<std::string> with_config(const std::vector<std::string>& args, CLI::App& app) {
  std::string path;
  int sub_at = -1;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (sub_at < 0 && !args[i].empty() && args[i][0] != '-') {
      for (const CLI::App* s : app.get_subcommands({})) {
        if (s->get_name() == args[i]) sub_at = static_cast<int>(i);
      }
    }
  }
  if (path.empty()) return args;
  if (sub_at < 0) throw ValidationError("--config needs a subcommand");
  const CLI::App* sub = app.get_subcommand(args[sub_at]);
  const auto entries = read_config(path, option_keys(sub));
  std::vector<std::string> out(args.begin(), args.begin() + sub_at + 1);
  for (const auto& [k, v] : entries) {
    const CLI::Option* o = sub->get_option("--" + k);
    if (o->get_type_size() == 0) {
      if (v == "true" || v == "1") {
        out.push_back("--" + k);
      } else if (!(v == "false" || v == "0")) {
        throw ValidationError("config key '" + k + "' expects true or false");
      }
    } else {
      out.push_back("--" + k);
      out.push_back(v);
    }
  }
  out.insert(out.end(), args.begin() + sub_at + 1, args.end());
  return out;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const WitnessNotFound& e) {
    std::cerr << "no witness: " << e.what() << "\n";
    return kExitNoWitness;
  } catch (const OracleDisagreement& e) {
    std::cerr << "oracle disagreement: " << e.what() << "\n";
    return kExitOracle;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature-controlled smoothing of circle-quotient metrics"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (overrides ORBSMOOTH_THREADS)")
      ->check(CLI::PositiveNumber);

  std::string config_path;
  auto add_config = [&](CLI::App* s) {
    s->add_option("--config", config_path, "Flat key = value file of option defaults");
  };

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "CSV of θ, R, R', R'', sec for a weighted quotient");
  profile->add_option("--m-minus", pa.m_minus, "Weight at θ = 0")->required();
  profile->add_option("--m-plus", pa.m_plus, "Weight at θ = π/2")->required();
  profile->add_option("--sheets", pa.sheets, "1, or 2 for the branched cover")
      ->check(CLI::IsMember({1, 2}));
  profile->add_option("--grid", pa.grid, "Intervals on [0, π/2]");
  profile->add_option("--out", pa.out, "CSV path (stdout if omitted)");
  add_config(profile);

  ResolveArgs ra;
  auto* resolve = app.add_subcommand("resolve", "Search a δ ladder for a curvature witness");
  resolve->add_option("--m-minus", ra.m_minus, "Weight at the resolved tip");
  resolve->add_option("--m-plus", ra.m_plus, "Weight at θ = π/2");
  resolve->add_flag("--branched", ra.branched, "Branched-cover weight 1 − 2/m");
  resolve->add_option("--tau", ra.tau, "Support of η, in (0, π/4)");
  resolve->add_option("--deltas", ra.deltas, "Descending δ ladder, comma-separated");
  resolve->add_option("--threshold", ra.threshold, "Required minimum curvature");
  resolve->add_option("--grid", ra.grid, "Intervals of the CSV sweep");
  resolve->add_option("--json", ra.out.json, "Certificate path (stdout if omitted)");
  resolve->add_option("--csv", ra.out.csv, "Sweep CSV path");
  add_config(resolve);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite; no name lists suites");
  verify->add_option("suite", va.suite, "Suite name");
  verify->add_option("--seed", va.seed, "Seed of randomized checks");
  verify->add_option("--out", va.out, "JSON path (stdout if omitted)");
  add_config(verify);

  GhArgs ga;
  auto* gh = app.add_subcommand("gh", "Gromov–Hausdorff convergence study along a τ ladder");
  gh->add_option("--m-minus", ga.m_minus, "Weight at the resolved tip");
  gh->add_option("--m-plus", ga.m_plus, "Weight at θ = π/2");
  gh->add_option("--taus", ga.taus, "Descending τ ladder");
  gh->add_option("--deltas", ga.deltas, "δ ladder for each witness");
  gh->add_option("--grid", ga.grid, "Rings and nodes per ring");
  gh->add_option("--stride", ga.stride, "Sampling stride of the metric-space points");
  gh->add_option("--json", ga.out.json, "Report path (stdout if omitted)");
  gh->add_option("--csv", ga.out.csv, "Table path");
  add_config(gh);

  EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "Embed a rotationally symmetric sphere in S³");
  embed->add_option("--profile", ea.profile, "sphere, spindle, hopf or resolved");
  embed->add_option("--kappa", ea.kappa, "Curvature of the sphere profile (≥ 1)");
  embed->add_option("--k", ea.k, "Spindle order");
  embed->add_option("--m-minus", ea.m_minus, "Resolved profile weight at θ = 0");
  embed->add_option("--m-plus", ea.m_plus, "Resolved profile weight at θ = π/2");
  embed->add_option("--tau", ea.tau, "Resolved profile τ");
  embed->add_option("--deltas", ea.deltas, "Resolved profile δ ladder");
  embed->add_option("--step", ea.step, "RK4 step");
  embed->add_option("--stride", ea.stride, "Node stride of the CSV");
  embed->add_option("--json", ea.out.json, "Summary path (stdout if omitted)");
  embed->add_option("--csv", ea.out.csv, "Curve CSV path");
  add_config(embed);

  BlendArgs ba;
  auto* blend = app.add_subcommand("blend", "Blend two curvature-1 metrics along an axis");
  blend->add_option("--shear", ba.shear, "Shear amplitude a");
  blend->add_option("--degree", ba.degree, "3 (first-order agreement) or 2")
      ->check(CLI::IsMember({2, 3}));
  blend->add_option("--eps", ba.eps, "Cutoff radius ε in (0, 1)");
  blend->add_option("--radii", ba.radii, "Log-spaced distances in the sweep");
  blend->add_option("--out", ba.out, "JSON path (stdout if omitted)");
  add_config(blend);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = with_config(args, app);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  if (threads > 0) setenv("ORBSMOOTH_THREADS", std::to_string(threads).c_str(), 1);

  if (*profile) return guarded([&] { return cmd_profile(pa); });
  if (*resolve) return guarded([&] { return cmd_resolve(ra); });
  if (*verify) return guarded([&] { return cmd_verify(va); });
  if (*gh) return guarded([&] { return cmd_gh(ga); });
  if (*embed) return guarded([&] { return cmd_embed(ea); });
  if (*blend) return guarded([&] { return cmd_blend(ba); });
  return kExitValidation;
}
