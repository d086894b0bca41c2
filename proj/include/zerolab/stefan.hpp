#pragma once

#include <vector>

#include "zerolab/model.hpp"
#include "zerolab/solver.hpp"

namespace zlab::stefan {

/// Fronts g < h and the profile on [g, h]. `q` is the conserved quantity
/// Q = int u dx + h / mu_right - g / mu_left, which reduces to
/// int u + (h - g) / mu for equal coefficients.
struct FreeBoundaryState {
  double g = 0.0, h = 1.0;
  Snapshot profile;
  double q = 0.0;
  bool extinct = false;

  double time() const { return profile.time(); }
};

struct FrontParams {
  double mu_left = 1.0, mu_right = 1.0;
  double min_gap = 1e-6;
};

/// Second-order one-sided u_x at the left (side 1) or right (side 2) front.
double boundary_slope(const FreeBoundaryState& state, int side);

/// Trapezoid integral of u plus the front term of Q.
double conserved_quantity(const Snapshot& profile, const FrontParams& params);

FreeBoundaryState make_state(Snapshot profile, const FrontParams& params);

/// One step in y = (x - g) / (h - g). The fronts use an explicit predictor
/// with the old slopes and one corrector with averaged slopes; w is
/// advanced twice accordingly. theta = 1 gives implicit Euler (startup).
/// Throws StefanError when a front would cross more than one cell.
FreeBoundaryState step_free_boundary(const FreeBoundaryState& state, const CoefficientField& field, double dt,
                                     const FrontParams& params, double theta = 0.5);

struct FreeBoundaryRun {
  std::vector<FreeBoundaryState> states;  // stored snapshots only
  BoundaryTrace left{1}, right{2};
  TrajectoryMeta meta;
  bool extinct = false;
  double extinction_time = 0.0;

  Trajectory to_trajectory() const;
};

FreeBoundaryRun solve_free_boundary(const ScenarioConfig& cfg);

/// gamma(t): location of the maximum of each profile refined by the vertex
/// of the parabola through the discrete argmax and its neighbours.
struct MaxLocationTrace {
  std::vector<double> t, gamma;
  std::vector<bool> plateau;  // excluded from the drift statistic

  /// sup gamma - inf gamma over the last `fraction` of the samples.
  double drift(double fraction) const;
  /// Mean of gamma over the same window.
  double mean(double fraction) const;
};

/// A sample is a plateau when three or more nodes lie within
/// plateau_tol * max|u| of the maximum.
MaxLocationTrace track_max_location(const std::vector<Snapshot>& profiles, double plateau_tol = 1e-8);

}  // namespace zlab::stefan
