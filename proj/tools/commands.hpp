#pragma once

#include <optional>
#include <string>
#include <vector>

namespace orbsmooth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNoWitness = 3;
inline constexpr int kExitOracle = 4;

struct Output {
  std::optional<std::string> json;  // path; stdout when unset
  std::optional<std::string> csv;
};

struct ProfileArgs {
  int m_minus = 1, m_plus = 1;
  int sheets = 1;
  int grid = 512;
  std::optional<std::string> out;
};

struct ResolveArgs {
  int m_minus = 2, m_plus = 3;
  bool branched = false;
  double tau = 0.3;
  std::string deltas = "0.1,0.01,0.001,0.0001";
  double threshold = 1.0;
  int grid = 1024;
  Output out;
};

struct VerifyArgs {
  std::string suite;
  unsigned seed = 20240611;
  std::optional<std::string> out;
};

struct GhArgs {
  int m_minus = 2, m_plus = 3;
  std::string taus = "0.4,0.2,0.1";
  std::string deltas = "0.1,0.01,0.001,0.0001";
  int grid = 128;
  int stride = 8;
  Output out;
};

struct EmbedArgs {
  std::string profile = "sphere";  // sphere, spindle, hopf, resolved
  double kappa = 4.0;
  int k = 2;
  int m_minus = 2, m_plus = 3;
  double tau = 0.3;
  std::string deltas = "0.1,0.01,0.001,0.0001";
  double step = 1e-4;
  int stride = 100;  // every stride-th node in the CSV
  Output out;
};

struct BlendArgs {
  double shear = 1.0;
  int degree = 3;
  double eps = 0.1;
  int radii = 160;
  std::optional<std::string> out;
};

int cmd_profile(const ProfileArgs& a);
int cmd_resolve(const ResolveArgs& a);
int cmd_verify(const VerifyArgs& a);
int cmd_gh(const GhArgs& a);
int cmd_embed(const EmbedArgs& a);
int cmd_blend(const BlendArgs& a);

std::vector<std::string> suite_names();

}  // namespace orbsmooth::cli
