#pragma once

// Discrete metric spaces from surfaces of revolution dθ² + R(θ)² dα²,
// correspondence upper bounds for the Gromov–Hausdorff distance and
// convergence studies of resolved quotient profiles.

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "orbsmooth/profile.hpp"

namespace orbsmooth {

// Worker threads: ORBSMOOTH_THREADS if set and positive, else the hardware count.
int worker_threads();

struct DiscreteMetricSpace {
  std::vector<std::string> labels;
  std::vector<std::array<double, 2>> coords;  // (θ, α); tips have α = 0
  Eigen::MatrixXd dist;

  int size() const { return static_cast<int>(labels.size()); }
  // Largest d(x, z) − d(x, y) − d(y, z); exhaustive up to 512 points, else
  // `samples` random triples.
  double triangle_violation(long samples = 1000000, unsigned seed = 1) const;
  // Throws ValidationError unless symmetric, zero on the diagonal and
  // triangle-consistent to tol.
  void validate(double tol = 1e-9) const;
};

struct SurfaceGrid {
  int n = 128;       // rings in θ and nodes per ring in α
  int stride = 8;    // every stride-th ring and node becomes a point
};

// Geodesic distances on dθ² + R(θ)² dα², θ ∈ [0, d], from shortest paths on
// the n × n grid (θ at cell centres) with 8 neighbours and 16 chords per node.
// Each settled node also relaxes through points on the segment between
// adjacent stencil neighbours, and a shortest-path closure over the sampled
// points finishes. The two tips are explicit points; their rows are the
// radial distances θ and d − θ. Throws ValidationError if R is not positive
// inside (0, d) or the grid is too coarse.
DiscreteMetricSpace surface_distances(const ProfileFunction& R, double d,
                                      SurfaceGrid grid = {});

// Half the distortion of the correspondence {(x_i, y_j)}. Throws
// ValidationError unless it covers both spaces.
double gh_upper_bound(const DiscreteMetricSpace& X, const DiscreteMetricSpace& Y,
                      const std::vector<std::pair<int, int>>& correspondence);
// Identity pairing of spaces with the same point count.
double gh_upper_bound(const DiscreteMetricSpace& X, const DiscreteMetricSpace& Y);

struct ConvergenceRow {
  double tau = 0.0;
  double delta = 0.0;
  bool witness = false;
  double gh_bound = 0.0;
  double min_curvature = 0.0;
};

struct ConvergenceStudy {
  int m_minus = 0, m_plus = 0;
  SurfaceGrid grid;
  std::vector<ConvergenceRow> rows;
  double base_self = 0.0;  // base against itself, identity pairing
  bool decreasing = false; // strictly, along the ladder
  double seconds = 0.0;
};

// Resolved profiles along a descending τ ladder against the unresolved
// quotient profile, each with its first δ witness (threshold 1) from
// `delta_ladder`, on a shared grid.
ConvergenceStudy convergence_study(int m_minus, int m_plus, const std::vector<double>& taus,
                                   const std::vector<double>& delta_ladder,
                                   SurfaceGrid grid = {});

}  // namespace orbsmooth
