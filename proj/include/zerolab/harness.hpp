#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zerolab/solver.hpp"
#include "zerolab/zeros.hpp"

namespace zlab::harness {

struct Violation {
  double t = 0.0;
  std::string expected, observed;
};

/// Result of one checker. It fails exactly when a violation was recorded.
struct CheckReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool passed() const { return violations.empty(); }
  void param(const std::string& key, double value);
  void param(const std::string& key, const std::string& value);
  void violate(double t, std::string expected, std::string observed);
  /// Key-value text block, one record per line.
  std::string to_text() const;
};

/// Z(t2) <= Z(t1) for burn_in <= t1 < t2.
CheckReport check_monotone(const ZeroTrace& zt, double burn_in);

struct DropOptions {
  double burn_in = 0.0;
  int window = 10;  // output steps on either side of the moment
};

/// Every multiple zero and every NZN/ZZN boundary moment after burn-in has
/// a drop event within the window. The number of NZN + ZZN moments from the
/// last sample not after burn-in onwards is at most Z at that sample.
CheckReport check_strict_drop(const ZeroTrace& zt, const std::vector<MomentClassification>& moments,
                              const DropOptions& opts);

struct HypothesisOptions {
  double burn_in = 0.0;
  double tau_d = 1e-4;
  double window = 0.0;    // time after a Z-moment inspected by (H3), (H3)*
  double h1_rel = 0.25;   // allowed jump of the endpoint slope within a Z-run
};

struct HypothesisSummary {
  int h2_checked = 0, h2_failed = 0;
  int h3_checked = 0, h3_failed = 0;
  int h3star_failed = 0;
  int h1_runs = 0, h1_failed = 0;
};

/// (H1) slope continuity of xi_i over Z-runs, (H2) at NZ* moments, (H3)
/// and (H3)* after Z-moments followed by N. (H3) is read with the interior
/// neighbour of the side: w_i(t) u(x, s) >= 0 for x next to xi_i(s). A
/// moment fails only when neither (H3) nor (H3)* holds.
CheckReport check_hypotheses(const Trajectory& traj, const std::vector<MomentClassification>& moments,
                             const HypothesisOptions& opts, HypothesisSummary* summary = nullptr);

/// Labels outside {N, NZN, NZZ, ZZN, ZZZ}.
CheckReport check_taxonomy(const std::vector<MomentClassification>& moments);

/// Boundary Z-runs longer than one sample (no ZZ*- or *ZZ-moments).
CheckReport check_isolated_moments(const std::vector<MomentClassification>& moments);

/// Per-side counts on [xi1, X] and [X, xi2] with X chosen per snapshot by
/// transform::choose_split_point; each side must be non-increasing over
/// every bracket on which u(X) keeps its sign.
CheckReport check_split(const Trajectory& traj, double tau_z, double tau_d, double burn_in);

// ---------------------------------------------------------------------------

/// A derived trajectory plus the samples at which it vanishes identically
/// (excluded from zero counting).
struct Difference {
  Trajectory traj;
  std::vector<bool> degenerate;
};

/// eta(x, t) = u(x, t + T) - u(x, t) for t0 + s <= t <= end - T on a fixed
/// grid. T must be a multiple of the snapshot spacing.
Difference build_shift_difference(const Trajectory& traj, double s, double period);

/// eta(x, t) = u(x0 + x, t) - u(x0 - x, t) on [xi1, xi2] with
/// xi1 = max(g - x0, x0 - h), xi2 = min(h - x0, x0 - g). u is taken as zero
/// outside its support and interpolated by cubic Lagrange polynomials.
Difference build_reflection_difference(const Trajectory& traj, double x0, int nodes = 0);

/// eta_x(0, t) = 2 u_x(x0, t) from the interpolant.
double reflection_center_slope(const Snapshot& profile, double x0);

/// u at x by the same interpolation (0 outside [left, right]).
double interpolate(const Snapshot& profile, double x);

// ---------------------------------------------------------------------------

struct Analysis {
  ZeroTrace zeros;
  std::vector<MomentClassification> moments;  // left, right
};

/// Zero trace over the snapshots (restricted to [xi1, xi1 + window] when a
/// window is given) and moment classification of both boundary traces.
Analysis analyze(const Trajectory& traj, const Tolerances& tol, std::optional<double> window = std::nullopt,
                 const std::vector<bool>* skip = nullptr);

Snapshot restrict_to(const Snapshot& snap, double x_max);

}  // namespace zlab::harness
