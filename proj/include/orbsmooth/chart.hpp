#pragma once

// Finite-difference curvature on coordinate charts of dimension 2 or 3.
//
// Conventions: R_{XY}Z = ∇_X∇_Y Z − ∇_Y∇_X Z,
//   Rm(i,j,k,l) = g(R_{∂i ∂j} ∂k, ∂l),
//   sec(u,v) = Rm(u,v,v,u) / (|u|²|v|² − <u,v>²),
// so the round sphere has sec = +1.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "orbsmooth/profile.hpp"

namespace orbsmooth {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

Vec make_point(std::initializer_list<double> xs);

struct CoordRange {
  std::string name;
  double lo = 0.0, hi = 0.0;
};

class ChartMetric {
 public:
  using MetricFn = std::function<Mat(const Vec&)>;

  ChartMetric() = default;
  ChartMetric(std::vector<CoordRange> coords, MetricFn g, double h_fd = 1e-4);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<CoordRange>& coords() const { return coords_; }
  double h_fd() const { return h_; }
  Mat operator()(const Vec& p) const { return g_(p); }
  const MetricFn& fn() const { return g_; }

  bool contains(const Vec& p, double margin = 0.0) const;
  // Throws DomainError unless p is at least 2·h_fd inside every range.
  void require_interior(const Vec& p) const;
  ChartMetric with_step(double h) const;

 private:
  std::vector<CoordRange> coords_;
  MetricFn g_;
  double h_ = 1e-4;
};

// Dense index arrays, dimension n ≤ 3.
struct Tensor3 {
  int n = 0;
  std::array<double, 27> v{};
  double& operator()(int a, int b, int c) { return v[(a * 3 + b) * 3 + c]; }
  double operator()(int a, int b, int c) const { return v[(a * 3 + b) * 3 + c]; }
};

struct Tensor4 {
  int n = 0;
  std::array<double, 81> v{};
  double& operator()(int a, int b, int c, int d) {
    return v[((a * 3 + b) * 3 + c) * 3 + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return v[((a * 3 + b) * 3 + c) * 3 + d];
  }
  double apply(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
};

struct PlaneSection {
  Vec point;
  Vec u, v;
};

struct CurvatureOperator {
  Eigen::Matrix3d matrix;       // bivector order (1,2), (1,3), (2,3)
  Eigen::Vector3d eigenvalues;  // ascending
};

// Metric coefficients with their first and second partial derivatives.
struct MetricDerivatives {
  int n = 0;
  Mat g;
  std::array<Mat, 3> dg;                 // dg[i] = ∂_i g
  std::array<std::array<Mat, 3>, 3> ddg; // ddg[i][j] = ∂_i∂_j g
};

// Rm from the coefficient derivatives; throws DomainError if g is not
// positive definite.
Tensor4 riemann_from_derivatives(const MetricDerivatives& d);

// Curvature operator in the columns of frame, which must be g-orthonormal.
CurvatureOperator curvature_operator_from_riemann(const Tensor4& rm, const Mat& g,
                                                  const Mat& frame);

// Gram-Schmidt of the coordinate basis against g.
Mat orthonormal_frame(const Mat& g);

// Same meaning as min_sectional_curvature, from Rm and g at the point.
double min_sectional_from_riemann(const Tensor4& rm, const Mat& g);

// Γ(k,i,j) = Γ^k_ij.
Tensor3 christoffel(const ChartMetric& metric, const Vec& point);

// Rm(i,j,k,l) as above.
Tensor4 riemann(const ChartMetric& metric, const Vec& point);

// Max violation of the four index symmetries.
double riemann_symmetry_violation(const Tensor4& rm);

double sectional_curvature(const ChartMetric& metric, const PlaneSection& plane);

// Entry [(i,j),(k,l)] = Rm(b_i, b_j, b_l, b_k) for the columns b of frame.
CurvatureOperator curvature_operator(const ChartMetric& metric, const Vec& point,
                                     const Mat& frame);

// −f''(r)/f(r).
double warped2d_curvature(const ProfileFunction& f, double r);

// Chart dr² + f(r)² dθ² on (a,b) × (0, 2π).
ChartMetric warped2d_chart(const ProfileFunction& f);

// ∇²f in chart coordinates.
Mat hessian_scalar(const ChartMetric& metric,
                   const std::function<double(const Vec&)>& func,
                   const Vec& point);

// g-orthonormal frame obtained from the coordinate basis (columns).
Mat orthonormal_frame(const ChartMetric& metric, const Vec& point);

// 2-dim: the curvature; 3-dim: the smallest eigenvalue of the curvature
// operator (every bivector is decomposable in dimension 3).
double min_sectional_curvature(const ChartMetric& metric, const Vec& point);

// Section metric σ plus Killing length φ: σ ⊕ φ² dα², angle last.
ChartMetric killing_ambient(const ChartMetric& sigma,
                            const std::function<double(const Vec&)>& phi);

// sup over points and test directions v of |−φ∇²φ(v,v) − Rm(X,v,v,X)|,
// X = ∂_α with |X| = φ, v unit tangent to the section.
double killing_hessian_check(const ChartMetric& sigma,
                             const std::function<double(const Vec&)>& phi,
                             const ChartMetric& ambient,
                             const std::vector<Vec>& section_points);

// Round S² in geodesic polar coordinates must give +1; throws otherwise.
void verify_sign_convention();

}  // namespace orbsmooth
