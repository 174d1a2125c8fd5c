#include "orbsmooth/chart.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "orbsmooth/error.hpp"

namespace orbsmooth {

Vec make_point(std::initializer_list<double> xs) {
  Vec p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

ChartMetric::ChartMetric(std::vector<CoordRange> coords, MetricFn g, double h_fd)
    : coords_(std::move(coords)), g_(std::move(g)), h_(h_fd) {
  if (dim() < 2 || dim() > 3) throw ValidationError("chart dimension must be 2 or 3");
  if (!(h_ > 0.0)) throw ValidationError("finite-difference step must be positive");
  for (const auto& c : coords_) {
    if (!(c.lo < c.hi)) throw ValidationError("empty coordinate range " + c.name);
  }
}

bool ChartMetric::contains(const Vec& p, double margin) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (p(i) < coords_[i].lo + margin || p(i) > coords_[i].hi - margin) return false;
  }
  return true;
}

void ChartMetric::require_interior(const Vec& p) const {
  if (p.size() != dim()) throw DomainError("point dimension does not match chart");
  if (!contains(p, 2.0 * h_)) {
    std::ostringstream os;
    os << "point closer than 2*h_fd to the chart boundary:";
    for (int i = 0; i < dim(); ++i) os << ' ' << coords_[i].name << '=' << p(i);
    throw DomainError(os.str());
  }
}

ChartMetric ChartMetric::with_step(double h) const {
  return ChartMetric(coords_, g_, h);
}

double Tensor4::apply(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += (*this)(a, b, c, d) * x(a) * y(b) * z(c) * w(d);
  return s;
}

namespace {

Mat inverse_metric(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(g(i, j))) throw DomainError("metric not finite at point");
    }
  }
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw DomainError("singular or indefinite metric");
  return llt.solve(Mat::Identity(n, n));
}

MetricDerivatives metric_jet(const ChartMetric& metric, const Vec& p, bool second) {
  metric.require_interior(p);
  MetricDerivatives J;
  const int n = metric.dim();
  const double h = metric.h_fd();
  J.n = n;
  J.g = metric(p);

  std::array<Mat, 3> gp, gm;
  for (int i = 0; i < n; ++i) {
    Vec q = p;
    q(i) += h;
    gp[i] = metric(q);
    q(i) = p(i) - h;
    gm[i] = metric(q);
    J.dg[i] = (gp[i] - gm[i]) / (2.0 * h);
  }
  if (!second) return J;
  for (int i = 0; i < n; ++i) {
    J.ddg[i][i] = (gp[i] - 2.0 * J.g + gm[i]) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      Vec q = p;
      q(i) += h; q(j) += h;
      Mat pp = metric(q);
      q(j) = p(j) - h;
      Mat pm = metric(q);
      q(i) = p(i) - h;
      Mat mm = metric(q);
      q(j) = p(j) + h;
      Mat mp = metric(q);
      J.ddg[i][j] = (pp - pm - mp + mm) / (4.0 * h * h);
      J.ddg[j][i] = J.ddg[i][j];
    }
  }
  return J;
}

// Γ_{njk} = ½(∂_j g_nk + ∂_k g_nj − ∂_n g_jk)
Tensor3 first_kind(const MetricDerivatives& J) {
  Tensor3 L;
  L.n = J.n;
  for (int a = 0; a < J.n; ++a)
    for (int j = 0; j < J.n; ++j)
      for (int k = 0; k < J.n; ++k)
        L(a, j, k) = 0.5 * (J.dg[j](a, k) + J.dg[k](a, j) - J.dg[a](j, k));
  return L;
}

Tensor3 raise(const Mat& ginv, const Tensor3& L) {
  Tensor3 G;
  G.n = L.n;
  for (int m = 0; m < L.n; ++m)
    for (int j = 0; j < L.n; ++j)
      for (int k = 0; k < L.n; ++k) {
        double s = 0.0;
        for (int a = 0; a < L.n; ++a) s += ginv(m, a) * L(a, j, k);
        G(m, j, k) = s;
      }
  return G;
}

}  // namespace

Tensor3 christoffel(const ChartMetric& metric, const Vec& point) {
  MetricDerivatives J = metric_jet(metric, point, false);
  return raise(inverse_metric(J.g), first_kind(J));
}

Tensor4 riemann(const ChartMetric& metric, const Vec& point) {
  return riemann_from_derivatives(metric_jet(metric, point, true));
}

Tensor4 riemann_from_derivatives(const MetricDerivatives& J) {
  const int n = J.n;
  const Mat ginv = inverse_metric(J.g);
  Tensor3 L = first_kind(J);
  Tensor3 G = raise(ginv, L);

  // dG[i](m,j,k) = ∂_i Γ^m_jk
  std::array<Tensor3, 3> dG;
  for (int i = 0; i < n; ++i) {
    Mat dginv = -ginv * J.dg[i] * ginv;
    dG[i].n = n;
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) {
            const double dL = 0.5 * (J.ddg[i][j](a, k) + J.ddg[i][k](a, j) -
                                     J.ddg[i][a](j, k));
            s += dginv(m, a) * L(a, j, k) + ginv(m, a) * dL;
          }
          dG[i](m, j, k) = s;
        }
  }

  Tensor4 rm;
  rm.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double up[3] = {0.0, 0.0, 0.0};  // (R_{ij} ∂k)^m
        for (int m = 0; m < n; ++m) {
          double s = dG[i](m, j, k) - dG[j](m, i, k);
          for (int q = 0; q < n; ++q) s += G(q, j, k) * G(m, i, q) - G(q, i, k) * G(m, j, q);
          up[m] = s;
        }
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += J.g(m, l) * up[m];
          rm(i, j, k, l) = s;
        }
      }
  return rm;
}

double riemann_symmetry_violation(const Tensor4& rm) {
  double worst = 0.0;
  const int n = rm.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double r = rm(i, j, k, l);
          worst = std::max({worst, std::abs(r + rm(j, i, k, l)),
                            std::abs(r + rm(i, j, l, k)), std::abs(r - rm(k, l, i, j))});
        }
  return worst;
}

double sectional_curvature(const ChartMetric& metric, const PlaneSection& plane) {
  const Mat g = metric(plane.point);
  const double uu = plane.u.dot(g * plane.u);
  const double vv = plane.v.dot(g * plane.v);
  const double uv = plane.u.dot(g * plane.v);
  const double gram = uu * vv - uv * uv;
  if (!(gram > 1e-12 * uu * vv)) throw DomainError("degenerate plane section");
  Tensor4 rm = riemann(metric, plane.point);
  return rm.apply(plane.u, plane.v, plane.v, plane.u) / gram;
}

CurvatureOperator curvature_operator(const ChartMetric& metric, const Vec& point,
                                     const Mat& frame) {
  if (metric.dim() != 3 || frame.rows() != 3 || frame.cols() != 3) {
    throw ValidationError("curvature operator needs a 3-dim chart and a 3-frame");
  }
  return curvature_operator_from_riemann(riemann(metric, point), metric(point), frame);
}

CurvatureOperator curvature_operator_from_riemann(const Tensor4& rm, const Mat& g,
                                                  const Mat& frame) {
  if (rm.n != 3 || frame.rows() != 3 || frame.cols() != 3) {
    throw ValidationError("curvature operator needs a 3-dim chart and a 3-frame");
  }
  const Mat gram = frame.transpose() * g * frame;
  if ((gram - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-8) {
    throw ValidationError("frame is not orthonormal at the point");
  }
  static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  CurvatureOperator op;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto& P = pairs[a];
      const auto& Q = pairs[b];
      op.matrix(a, b) = rm.apply(frame.col(P[0]), frame.col(P[1]), frame.col(Q[1]),
                                 frame.col(Q[0]));
    }
  op.matrix = 0.5 * (op.matrix + op.matrix.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(op.matrix);
  op.eigenvalues = es.eigenvalues();
  return op;
}

double warped2d_curvature(const ProfileFunction& f, double r) {
  const double v = f(r);
  if (!(v > 0.0)) throw DomainError("warping function must be positive");
  return -f.derivative(2, r) / v;
}

ChartMetric warped2d_chart(const ProfileFunction& f) {
  return ChartMetric({{"r", f.lower(), f.upper()}, {"theta", 0.0, 2.0 * std::numbers::pi}},
                     [f](const Vec& p) {
                       Mat g = Mat::Zero(2, 2);
                       const double w = f(p(0));
                       g(0, 0) = 1.0;
                       g(1, 1) = w * w;
                       return g;
                     });
}

Mat hessian_scalar(const ChartMetric& metric,
                   const std::function<double(const Vec&)>& func, const Vec& point) {
  metric.require_interior(point);
  const int n = metric.dim();
  const double h = metric.h_fd();
  Tensor3 G = christoffel(metric, point);
  const double f0 = func(point);
  Vec grad(n);
  Mat H(n, n);
  std::array<double, 3> fp{}, fm{};
  for (int i = 0; i < n; ++i) {
    Vec q = point;
    q(i) += h;
    fp[i] = func(q);
    q(i) = point(i) - h;
    fm[i] = func(q);
    grad(i) = (fp[i] - fm[i]) / (2.0 * h);
    H(i, i) = (fp[i] - 2.0 * f0 + fm[i]) / (h * h);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec q = point;
      q(i) += h; q(j) += h;
      const double pp = func(q);
      q(j) = point(j) - h;
      const double pm = func(q);
      q(i) = point(i) - h;
      const double mm = func(q);
      q(j) = point(j) + h;
      const double mp = func(q);
      H(i, j) = H(j, i) = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += G(k, i, j) * grad(k);
      H(i, j) -= s;
    }
  return H;
}

Mat orthonormal_frame(const ChartMetric& metric, const Vec& point) {
  return orthonormal_frame(metric(point));
}

Mat orthonormal_frame(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  Mat frame = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    Vec e = frame.col(i);
    for (int j = 0; j < i; ++j) {
      Vec b = frame.col(j);
      e -= b * b.dot(g * e);
    }
    const double nrm = std::sqrt(e.dot(g * e));
    if (!(nrm > 0.0)) throw DomainError("degenerate metric");
    frame.col(i) = e / nrm;
  }
  return frame;
}

double min_sectional_curvature(const ChartMetric& metric, const Vec& point) {
  if (metric.dim() == 2) {
    PlaneSection s{point, make_point({1.0, 0.0}), make_point({0.0, 1.0})};
    return sectional_curvature(metric, s);
  }
  return curvature_operator(metric, point, orthonormal_frame(metric, point)).eigenvalues(0);
}

double min_sectional_from_riemann(const Tensor4& rm, const Mat& g) {
  if (rm.n == 2) {
    return rm(0, 1, 1, 0) / (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
  }
  return curvature_operator_from_riemann(rm, g, orthonormal_frame(g)).eigenvalues(0);
}

ChartMetric killing_ambient(const ChartMetric& sigma,
                            const std::function<double(const Vec&)>& phi) {
  if (sigma.dim() != 2) throw ValidationError("section chart must be 2-dimensional");
  auto coords = sigma.coords();
  coords.push_back({"alpha", 0.0, 2.0 * std::numbers::pi});
  return ChartMetric(
      coords,
      [sigma, phi](const Vec& p) {
        Vec q = p.head(2);
        Mat g = Mat::Zero(3, 3);
        g.topLeftCorner(2, 2) = sigma(q);
        const double f = phi(q);
        g(2, 2) = f * f;
        return g;
      },
      sigma.h_fd());
}

double killing_hessian_check(const ChartMetric& sigma,
                             const std::function<double(const Vec&)>& phi,
                             const ChartMetric& ambient,
                             const std::vector<Vec>& section_points) {
  if (ambient.dim() != 3 || sigma.dim() != 2) {
    throw ValidationError("Killing check needs a 2-dim section and a 3-dim ambient chart");
  }
  const double alpha0 = 0.5 * (ambient.coords()[2].lo + ambient.coords()[2].hi);
  double worst = 0.0;
  for (const Vec& p : section_points) {
    const double f = phi(p);
    if (!(f > 0.0)) throw DomainError("Killing length vanishes on the test region");
    const Mat H = hessian_scalar(sigma, phi, p);
    const Mat gs = sigma(p);
    Vec q(3);
    q << p(0), p(1), alpha0;
    const Tensor4 rm = riemann(ambient, q);
    Vec X = make_point({0.0, 0.0, 1.0});
    const Vec dirs[3] = {make_point({1.0, 0.0}), make_point({0.0, 1.0}),
                         make_point({1.0, 1.0})};
    for (const Vec& d : dirs) {
      const Vec v = d / std::sqrt(d.dot(gs * d));
      Vec v3(3);
      v3 << v(0), v(1), 0.0;
      const double lhs = -f * v.dot(H * v);
      const double rhs = rm.apply(X, v3, v3, X);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

void verify_sign_convention() {
  ProfileFunction s(0.0, std::numbers::pi, [](double r) {
    Jet4 x = Jet4::variable(r);
    return sin(x);
  }, 4);
  const ChartMetric sphere = warped2d_chart(s);
  PlaneSection plane{make_point({1.0, 1.0}), make_point({1.0, 0.0}), make_point({0.0, 1.0})};
  const double k = sectional_curvature(sphere, plane);
  if (std::abs(k - 1.0) > 1e-5) {
    throw OracleDisagreement("curvature sign convention self-test failed: round sphere gives " +
                             std::to_string(k));
  }
}

}  // namespace orbsmooth
