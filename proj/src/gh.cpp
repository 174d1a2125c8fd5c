#include "orbsmooth/gh.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <queue>
#include <random>
#include <thread>

#include "orbsmooth/error.hpp"
#include "orbsmooth/eta.hpp"
#include "orbsmooth/quadrature.hpp"
#include "orbsmooth/quotient.hpp"

namespace orbsmooth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Offset {
  int di, dj;
};

// 8 neighbours and 16 chords, ordered by angle in the index plane.
std::vector<Offset> stencil() {
  std::vector<Offset> s;
  for (int di = -3; di <= 3; ++di) {
    for (int dj = -3; dj <= 3; ++dj) {
      const int a = std::abs(di), b = std::abs(dj);
      const bool near = std::max(a, b) == 1;
      const bool chord = (a == 1 && b == 2) || (a == 2 && b == 1) || (a == 1 && b == 3) ||
                         (a == 3 && b == 1);
      if (near || chord) s.push_back({di, dj});
    }
  }
  std::sort(s.begin(), s.end(), [](Offset x, Offset y) {
    return std::atan2(x.di, x.dj) < std::atan2(y.di, y.dj);
  });
  return s;
}

// Length of the coordinate segment from (θ₀, α₀) by (Δθ, Δα).
double segment_length(const GaussRule& gr, double theta0,
                      double dtheta, double dalpha, const ProfileFunction& R) {
  double acc = 0.0;
  for (size_t k = 0; k < gr.x.size(); ++k) {
    const double s = 0.5 * (gr.x[k] + 1.0);
    const double Rv = R(theta0 + s * dtheta);
    acc += 0.5 * gr.w[k] * std::sqrt(dtheta * dtheta + Rv * Rv * dalpha * dalpha);
  }
  return acc;
}

template <class F>
void parallel_for(int count, F&& body) {
  const int workers = std::min(worker_threads(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

int worker_threads() {
  if (const char* env = std::getenv("ORBSMOOTH_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double DiscreteMetricSpace::triangle_violation(long samples, unsigned seed) const {
  const int n = size();
  double worst = 0.0;
  auto check = [&](int x, int y, int z) {
    worst = std::max(worst, dist(x, z) - dist(x, y) - dist(y, z));
  };
  if (n <= 512) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) check(x, y, z);
    return worst;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> U(0, n - 1);
  for (long s = 0; s < samples; ++s) check(U(rng), U(rng), U(rng));
  return worst;
}

void DiscreteMetricSpace::validate(double tol) const {
  const int n = size();
  if (dist.rows() != n || dist.cols() != n) {
    throw ValidationError("distance matrix does not match the point count");
  }
  for (int i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) throw ValidationError("nonzero diagonal in distance matrix");
    for (int j = 0; j < i; ++j) {
      if (dist(i, j) != dist(j, i)) throw ValidationError("distance matrix is not symmetric");
      if (!(dist(i, j) >= 0.0)) throw ValidationError("negative or undefined distance");
    }
  }
  const double v = triangle_violation();
  if (v > tol) {
    throw ValidationError("triangle inequality violated by " + std::to_string(v));
  }
}

DiscreteMetricSpace surface_distances(const ProfileFunction& R, double d, SurfaceGrid grid) {
  const int n = grid.n;
  if (n < 8) throw ValidationError("grid too coarse: need at least 8 rings");
  if (grid.stride < 1 || n % grid.stride != 0) {
    throw ValidationError("stride must divide the grid size");
  }
  if (!(d > 0.0)) throw ValidationError("tip distance must be positive");
  const double h = d / n, ha = kTwoPi / n;
  std::vector<double> theta(n);
  for (int i = 0; i < n; ++i) {
    theta[i] = h * (i + 0.5);
    if (!(R(theta[i]) > 0.0)) {
      throw ValidationError("profile must be positive inside (0, d)");
    }
  }

  const auto S = stencil();
  const int m = static_cast<int>(S.size());
  std::vector<int> opposite(m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      if (S[l].di == -S[k].di && S[l].dj == -S[k].dj) opposite[k] = l;
    }
  }
  const GaussRule& gr = gauss_legendre(8);
  // weight[i][k]: edge from ring i along S[k]
  std::vector<std::vector<double>> weight(n, std::vector<double>(m, INFINITY));
  std::vector<double> Rr(n), R2(n);
  for (int i = 0; i < n; ++i) {
    Rr[i] = R(theta[i]);
    R2[i] = Rr[i] * Rr[i];
    for (int k = 0; k < m; ++k) {
      const int i1 = i + S[k].di;
      if (i1 >= 0 && i1 < n) {
        weight[i][k] = segment_length(gr, theta[i], S[k].di * h, S[k].dj * ha, R);
      }
    }
  }

  const int rings = n / grid.stride;
  const int per_ring = n / grid.stride;
  const int npts = rings * per_ring + 2;
  DiscreteMetricSpace X;
  X.labels.reserve(npts);
  X.labels.push_back("tip0");
  X.coords.push_back({0.0, 0.0});
  X.labels.push_back("tip1");
  X.coords.push_back({d, 0.0});
  for (int a = 0; a < rings; ++a) {
    for (int b = 0; b < per_ring; ++b) {
      const int i = a * grid.stride + grid.stride / 2, j = b * grid.stride;
      X.labels.push_back("p" + std::to_string(i) + "_" + std::to_string(j));
      X.coords.push_back({theta[i], ha * j});
    }
  }
  X.dist = Eigen::MatrixXd::Zero(npts, npts);

  auto node = [n](int i, int j) { return i * n + ((j % n) + n) % n; };

  // Update of v through the inserted point (1 − t)u + t w, u and w adjacent
  // stencil neighbours of v, with the metric frozen at the segment middle.
  auto through_segment = [&](int iv, Offset ou, Offset ow, double Du, double Dw) -> double {
    const int imid = std::clamp(iv + (ou.di + ow.di) / 2, 0, n - 1);
    const double g = 0.5 * (R2[iv] + R2[imid]);
    const double ux = ou.di * h, uy = ou.dj * ha;
    const double ex = (ow.di - ou.di) * h, ey = (ow.dj - ou.dj) * ha;
    const double ee = ex * ex + g * ey * ey, ue = ux * ex + g * uy * ey;
    const double uu = ux * ux + g * uy * uy;
    const double e = std::sqrt(ee), b = Dw - Du;
    if (!(std::abs(b) < e)) return INFINITY;
    const double c = std::sqrt(std::max(0.0, uu - ue * ue / ee));
    const double sv = -b * c * e / std::sqrt(ee - b * b);
    const double t = (sv - ue) / ee;
    if (!(t > 0.0 && t < 1.0)) return INFINITY;
    return Du + t * b + std::sqrt(std::max(0.0, uu + 2.0 * t * ue + t * t * ee));
  };

  // One source per sampled ring at α index 0; rotation gives the rest.
  std::vector<std::vector<double>> field(rings);
  std::atomic<bool> disconnected{false};
  parallel_for(rings, [&](int a) {
    const int src_ring = a * grid.stride + grid.stride / 2;
    std::vector<double> D(n * n, INFINITY);
    std::vector<char> done(n * n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    D[node(src_ring, 0)] = 0.0;
    pq.push({0.0, node(src_ring, 0)});
    int settled = 0;
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      ++settled;
      const int i = u / n, j = u % n;
      for (int k = 0; k < m; ++k) {
        if (!std::isfinite(weight[i][k])) continue;
        const int iv = i + S[k].di, jv = j + S[k].dj;
        const int v = node(iv, jv);
        if (done[v]) continue;
        double nd = du + weight[i][k];
        // u seen from v is S[opposite[k]]; try both adjacent directions
        const int ku = opposite[k];
        for (int side : {-1, 1}) {
          const Offset ou = S[ku], ow = S[(ku + side + m) % m];
          const int iw = iv + ow.di;
          if (iw < 0 || iw >= n) continue;
          const int w = node(iw, jv + ow.dj);
          if (!done[w]) continue;
          nd = std::min(nd, through_segment(iv, ou, ow, du, D[w]));
        }
        if (nd < D[v]) {
          D[v] = nd;
          pq.push({nd, v});
        }
      }
    }
    if (settled != n * n) disconnected = true;
    field[a] = std::move(D);
  });
  if (disconnected) throw ValidationError("grid graph is disconnected; refine the grid");

  auto point_ring = [&](int p) { return (p - 2) / per_ring; };
  auto point_col = [&](int p) { return ((p - 2) % per_ring) * grid.stride; };
  for (int p = 2; p < npts; ++p) {
    const double t = X.coords[p][0];
    X.dist(0, p) = X.dist(p, 0) = t;
    X.dist(1, p) = X.dist(p, 1) = d - t;
    for (int q = 2; q < p; ++q) {
      const int a = point_ring(p), b = point_ring(q);
      const int ia = a * grid.stride + grid.stride / 2, ib = b * grid.stride + grid.stride / 2;
      const double dpq = field[a][node(ib, point_col(q) - point_col(p))];
      const double dqp = field[b][node(ia, point_col(p) - point_col(q))];
      X.dist(p, q) = X.dist(q, p) = 0.5 * (dpq + dqp);
    }
  }
  X.dist(0, 1) = X.dist(1, 0) = d;
  // shortest-path closure over the sampled points makes the matrix a metric
  for (int k = 0; k < npts; ++k) {
    for (int i = 0; i < npts; ++i) {
      const double dik = X.dist(i, k);
      for (int j = 0; j < npts; ++j) {
        const double c = dik + X.dist(k, j);
        if (c < X.dist(i, j)) X.dist(i, j) = c;
      }
    }
  }
  return X;
}

double gh_upper_bound(const DiscreteMetricSpace& X, const DiscreteMetricSpace& Y,
                      const std::vector<std::pair<int, int>>& corr) {
  std::vector<char> cx(X.size(), 0), cy(Y.size(), 0);
  for (auto [i, j] : corr) {
    if (i < 0 || i >= X.size() || j < 0 || j >= Y.size()) {
      throw ValidationError("correspondence index out of range");
    }
    cx[i] = cy[j] = 1;
  }
  if (std::find(cx.begin(), cx.end(), 0) != cx.end() ||
      std::find(cy.begin(), cy.end(), 0) != cy.end()) {
    throw ValidationError("correspondence does not cover both spaces");
  }
  double dis = 0.0;
  for (auto [i, j] : corr)
    for (auto [k, l] : corr) dis = std::max(dis, std::abs(X.dist(i, k) - Y.dist(j, l)));
  return 0.5 * dis;
}

double gh_upper_bound(const DiscreteMetricSpace& X, const DiscreteMetricSpace& Y) {
  if (X.size() != Y.size()) throw ValidationError("identity pairing needs equal point counts");
  std::vector<std::pair<int, int>> corr(X.size());
  for (int i = 0; i < X.size(); ++i) corr[i] = {i, i};
  return gh_upper_bound(X, Y, corr);
}

ConvergenceStudy convergence_study(int m_minus, int m_plus, const std::vector<double>& taus,
                                   const std::vector<double>& delta_ladder, SurfaceGrid grid) {
  const auto t0 = std::chrono::steady_clock::now();
  if (taus.empty()) throw ValidationError("empty τ ladder");
  for (size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] < taus[i - 1])) throw ValidationError("τ ladder must be descending");
  }
  const auto base = make_quotient_profile(m_minus, m_plus);
  const double d = std::numbers::pi / 2.0;
  ConvergenceStudy st;
  st.m_minus = m_minus;
  st.m_plus = m_plus;
  st.grid = grid;
  const auto X = surface_distances(base.R, d, grid);
  st.base_self = gh_upper_bound(X, X);
  for (double tau : taus) {
    ConvergenceRow row;
    row.tau = tau;
    const auto L = find_delta_witness(base, tau, delta_ladder, 1.0);
    row.witness = L.found;
    if (L.found) {
      row.delta = L.delta;
      row.min_curvature = L.sweep.min_curvature;
      row.gh_bound = gh_upper_bound(X, surface_distances(L.resolved, d, grid));
    } else {
      row.gh_bound = INFINITY;
    }
    st.rows.push_back(row);
  }
  st.decreasing = true;
  for (size_t i = 1; i < st.rows.size(); ++i) {
    if (!(st.rows[i].gh_bound < st.rows[i - 1].gh_bound)) st.decreasing = false;
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

}  // namespace orbsmooth
