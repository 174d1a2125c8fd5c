#include "orbsmooth/hyper.hpp"

#include "orbsmooth/error.hpp"

namespace orbsmooth {

namespace {

HyperPoint seed(const Vec& p) {
  if (p.size() != 3) throw DomainError("exact metrics are 3-dimensional");
  return {Hyper::variable(p(0), 0), Hyper::variable(p(1), 1), Hyper::variable(p(2), 2)};
}

}  // namespace

Mat HyperMetric::value(const Vec& p) const {
  if (p.size() != 3) throw DomainError("exact metrics are 3-dimensional");
  const HyperMat m = fn_({Hyper(p(0)), Hyper(p(1)), Hyper(p(2))});
  Mat g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = m[i][j].v;
  return g;
}

MetricDerivatives HyperMetric::derivatives(const Vec& p) const {
  const HyperMat m = fn_(seed(p));
  MetricDerivatives d;
  d.n = 3;
  d.g = Mat(3, 3);
  for (int a = 0; a < 3; ++a) {
    d.dg[a] = Mat(3, 3);
    for (int b = 0; b < 3; ++b) d.ddg[a][b] = Mat(3, 3);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Hyper& e = m[i][j];
      d.g(i, j) = e.v;
      for (int a = 0; a < 3; ++a) {
        d.dg[a](i, j) = e.d(a);
        for (int b = 0; b < 3; ++b) d.ddg[a][b](i, j) = e.H(a, b);
      }
    }
  return d;
}

ChartMetric HyperMetric::chart(double h_fd) const {
  return ChartMetric(coords_, [fn = fn_](const Vec& p) {
    const HyperMat m = fn({Hyper(p(0)), Hyper(p(1)), Hyper(p(2))});
    Mat g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = m[i][j].v;
    return g;
  }, h_fd);
}

Tensor4 riemann_exact(const HyperMetric& g, const Vec& p) {
  return riemann_from_derivatives(g.derivatives(p));
}

double min_sectional_exact(const HyperMetric& g, const Vec& p) {
  const MetricDerivatives d = g.derivatives(p);
  return min_sectional_from_riemann(riemann_from_derivatives(d), d.g);
}

}  // namespace orbsmooth
