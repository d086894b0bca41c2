#pragma once

#include <span>
#include <string>
#include <vector>

#include "zerolab/model.hpp"

namespace zlab {

/// Values of u at one end of the domain, sampled at every internal step.
/// `inner` is u at the first interior node, `slope` the one-sided u_x
/// estimate, `scale` the profile max |u|, `position` the endpoint xi_i(t).
struct BoundaryTrace {
  BoundaryTrace() = default;
  explicit BoundaryTrace(int s) : side(s) {}

  int side = 1;
  std::vector<double> t, value, inner, slope, scale, position;

  std::size_t size() const { return t.size(); }
  void push(double tt, double w, double in, double s, double sc, double pos) {
    t.push_back(tt);
    value.push_back(w);
    inner.push_back(in);
    slope.push_back(s);
    scale.push_back(sc);
    position.push_back(pos);
  }
};

struct TrajectoryMeta {
  std::string scheme = "crank-nicolson";
  double dt = 0.0;
  int nodes = 0;
  int output_every = 1;
  friend bool operator==(const TrajectoryMeta&, const TrajectoryMeta&) = default;
};

/// Front positions and the conserved quantity Q = int u + (h - g) / mu,
/// one entry per snapshot; empty for fixed and prescribed-moving domains.
struct FrontTrace {
  std::vector<double> g, h, q;
  bool empty() const { return g.empty(); }
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  BoundaryTrace left{1}, right{2};
  TrajectoryMeta meta;
  FrontTrace fronts;
};

namespace solver {

struct StepOptions {
  double theta = 0.5;  // 0.5 Crank-Nicolson, 1 implicit Euler
  int newton_max_iter = 50;
  double newton_tol = 1e-12;
};

struct StepInfo {
  int newton_iterations = 0;
  double newton_residual = 0.0;
  /// |row residual| of the left/right boundary equations after the solve,
  /// relative to max(1, max|w|). Covers Robin, Neumann and flux rows.
  double boundary_residual_left = 0.0;
  double boundary_residual_right = 0.0;
};

/// One step of length dt on the fixed interval spanned by `state`. Interior
/// coefficients are taken at t + dt/2, boundary data at each time level.
Snapshot advance(const Snapshot& state, const CoefficientField& field, const BoundaryCondition& left,
                 const BoundaryCondition& right, double dt, const StepOptions& opts = {}, StepInfo* info = nullptr);

/// Time loop over the scenario; moving domains are stepped in the
/// immobilized coordinate y in [0, 1].
Trajectory solve_trajectory(const ScenarioConfig& cfg);

/// |u_x + (-1)^i beta u| (Robin/Neumann) or |u_x - g(t,u)| (flux) at each
/// end of the snapshot, with u_x the second-order one-sided estimate. This
/// is a truncation-level quantity (O(dx^2)); the discrete enforcement
/// residual is reported per step in StepInfo. NaN for Dirichlet sides.
std::pair<double, double> boundary_residuals(const Snapshot& snap, const BoundaryCondition& left,
                                             const BoundaryCondition& right);

namespace detail {

/// Boundary row of the tridiagonal operator in computational units:
/// left  w_y(0) =  beta w + sigma,   right w_y(1) = -beta w + sigma,
/// with sigma = scale * g(t, w) for a nonlinear flux.
struct SideRow {
  enum class Kind { Dirichlet, Robin, Flux, Symmetry } kind = Kind::Dirichlet;
  double value = 0.0;  // Dirichlet
  double beta = 0.0;   // Robin, already multiplied by the domain length
  double sigma = 0.0;  // Robin inhomogeneity
  const Field* g = nullptr;
  double scale = 1.0;  // Flux: w_y = scale * g
  double t = 0.0;
  int dimension = 1;  // Symmetry: ball dimension N
};

struct LevelCoefficients {
  std::vector<double> a, b, c;
};

/// theta-scheme step on the uniform computational grid with spacing h.
/// `source` (may be empty) is added as dt * source on every row that is not
/// a Dirichlet row.
std::vector<double> theta_step(std::span<const double> w, double h, const LevelCoefficients& co,
                               const SideRow& left_old, const SideRow& right_old, const SideRow& left_new,
                               const SideRow& right_new, std::span<const double> source, double dt,
                               const StepOptions& opts, StepInfo* info);

SideRow side_row(const BoundaryCondition& bc, double t, double length, bool origin_symmetry, int dimension);

/// Solve a tridiagonal system. Throws SolverError when a row is not
/// diagonally dominant or a pivot vanishes.
std::vector<double> solve_tridiagonal(std::span<const double> lo, std::span<const double> di,
                                      std::span<const double> up, std::span<const double> rhs, double t);

}  // namespace detail

}  // namespace solver

}  // namespace zlab
