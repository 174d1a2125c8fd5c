#pragma once

// Convolution smoothing of concave functions on two-dimensional sections and
// the cutoff blend that keeps them unchanged away from their kinks.

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace orbsmooth {

using Point2 = Eigen::Vector2d;
using Field2 = std::function<double(const Point2&)>;

// A section with an explicit exponential map. Chart coordinates:
//   flat         (x, y), metric dx² + dy²
//   round_fermi  (s, t), metric cos²t ds² + dt² (unit sphere)
// Tangent vectors are given in the orthonormal frame (f⁻¹∂₁, ∂₂).
class SectionGeometry {
 public:
  enum class Kind { flat, round_fermi };

  explicit SectionGeometry(Kind kind = Kind::flat) : kind_(kind) {}
  Kind kind() const { return kind_; }

  Point2 exp(const Point2& p, const Point2& v) const;
  double distance(const Point2& p, const Point2& q) const;

 private:
  Kind kind_;
};

// Radial bump e^{−1/(1−r²)} on [0,1), zero beyond.
double mollifier_profile(double r);

struct ConvolutionRule {
  int radial = 24;   // Gauss-Legendre nodes on [0, width]
  int angular = 48;  // trapezoid nodes on [0, 2π)
};

// ∫_{T_pΣ} f(exp_p v) σ_w(|v|) dv with σ_w of unit mass. The discrete weights
// are normalized so constants are reproduced exactly.
double riemannian_convolution(const SectionGeometry& geom, const Field2& f,
                              const Point2& p, double width, ConvolutionRule rule = {});

// j = 1 on the ε/2-neighbourhood of K, 0 outside the ε-neighbourhood.
Field2 box_cutoff(std::function<double(const Point2&)> dist_to_K, double eps);

// Distance on the round section to the meridian arc {s = s0, t_lo ≤ t ≤ t_hi}.
double meridian_arc_distance(double s0, double t_lo, double t_hi, const Point2& p);

// j·smooth + (1 − j)·rough; smooth is evaluated only where j > 0.
Field2 blend(Field2 smooth, Field2 rough, Field2 j);

struct ConcavityProbe {
  int probes = 0;
  int violations = 0;      // second differences ≥ −tol
  double max_second = 0.0; // largest (f(p+) + f(p−) − 2f(p)) / step²
};

// Geodesic second differences at each point in `directions` evenly spaced
// directions. A violation is a value above −tol.
ConcavityProbe second_difference_probe(const SectionGeometry& geom, const Field2& f,
                                       const std::vector<Point2>& points, double step,
                                       int directions = 8, double tol = 0.0);

struct GreeneWuLevel {
  double width = 0.0;
  ConcavityProbe probe;
  double deviation = 0.0;  // max |ψⁿ − ψ| on probe points of the blend annulus
  bool concave = false;
};

struct GreeneWuResult {
  std::vector<GreeneWuLevel> levels;
  int first_concave = -1;  // index into the ladder, −1 if none
  Field2 smoothed;         // blend at first_concave (or the last level)
};

struct GreeneWuOptions {
  double step_fraction = 0.5;  // probe step relative to the mollifier width
  int directions = 8;
  ConvolutionRule rule;
};

// Smooths ψ near its non-smooth set K (given through its distance function)
// for each width of the ladder and blends with j = box_cutoff(·, ε).
// Refuses (ValidationError) if ψ fails the concavity probe at scale ε/2.
GreeneWuResult greene_wu_smooth(const SectionGeometry& geom, const Field2& psi,
                                std::function<double(const Point2&)> dist_to_K,
                                double eps, const std::vector<double>& widths,
                                const std::vector<Point2>& probes,
                                GreeneWuOptions options = {});

}  // namespace orbsmooth
