#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "zerolab/model.hpp"

namespace zlab {

enum class ZeroKind { Simple, Multiple };

struct Zero {
  double location = 0.0;
  ZeroKind kind = ZeroKind::Simple;
  bool at_boundary = false;
  double slope = 0.0;  // min |u_x| over the cluster, or the secant slope
};

/// Zeros of one snapshot on the closed interval, sorted by location.
struct ZeroInventory {
  double t = 0.0;
  double left = 0.0, right = 1.0;  // I(t)
  double spacing = 0.0;
  std::vector<Zero> zeros;

  int count() const { return static_cast<int>(zeros.size()); }
  bool has_multiple() const;
  bool has_interior_multiple() const;
};

/// Near-zero clusters (|u| <= tau_z * max|u|) count as one zero each; a
/// strict sign change between neighbouring nodes counts one simple zero at
/// the secant root. A cluster is multiple when min |u_x| over it is at most
/// tau_d * max|u| / dx or both flanks carry the same sign.
/// Throws ZeroError when the whole profile is near zero.
ZeroInventory count_zeros(const Snapshot& snap, double tau_z, double tau_d);

struct ZeroCurve {
  int id = 0;
  std::vector<double> t, x;
  bool ended = false;
};

enum class WitnessKind { Merge, BoundaryExit, Vanish };
std::string to_string(WitnessKind kind);

struct DropEvent {
  double t_before = 0.0, t_after = 0.0;
  int z_before = 0, z_after = 0;
  WitnessKind witness = WitnessKind::Vanish;
  std::vector<double> locations;  // last positions of the vanished curves
};

struct ZeroTrace {
  std::vector<ZeroInventory> inventories;
  std::vector<DropEvent> drops;
  std::vector<ZeroCurve> curves;
  std::vector<std::string> notes;  // ambiguous matches resolved by order

  std::vector<double> times() const;
  std::vector<int> counts() const;
};

struct TraceOptions {
  /// Max displacement between consecutive inventories, as a fraction of
  /// the interval length.
  double match_radius = 0.05;
};

/// Link zeros of consecutive inventories into curves. Matching is the
/// order-preserving assignment with the most pairs within the radius and,
/// among those, the smallest total displacement. Vanished curves form drop
/// events: two neighbouring curves vanishing together are a merge, a curve
/// whose last position lies within the radius of an endpoint is a boundary
/// exit. Drops in adjacent brackets are consolidated into one event.
ZeroTrace trace_zero_curves(std::vector<ZeroInventory> inventories, const TraceOptions& opts = {});

// ---------------------------------------------------------------------------
// Boundary moments

enum class Context { N, Z, X };
char letter(Context c);

/// Maximal run of Z samples [first, last] of a boundary trace. A sign change
/// between two consecutive N samples is a run of zero length (`between` is
/// true, `first` is the index of the later sample, t the secant root).
struct ZRun {
  std::size_t first = 0, last = 0;
  double t_start = 0.0, t_end = 0.0;
  bool between = false;
  Context left = Context::Z, right = Context::Z;

  std::size_t samples() const { return between ? 0 : last - first + 1; }
  /// Labels of the moments in the run, in time order (interior moments of a
  /// long run collapse into one ZZZ entry).
  std::vector<std::string> labels() const;
};

/// (r, s) u [s, r1] u (r1, s1): an N-run, a Z-run and another N-run.
struct AInterval {
  double r, s, r1, s1;
};

struct MomentClassification {
  int side = 1;
  double tau_z = 0.0;
  int window = 0, alternations = 0;
  std::size_t n_samples = 0, n_zero_samples = 0;
  std::vector<ZRun> runs;
  std::vector<AInterval> a_intervals;

  /// Every label emitted, with "N" when any N sample exists.
  std::set<std::string> label_set() const;
  int count(const std::string& label) const;
};

/// Label each sample Z when |w| <= tau_z * scale (per-sample scale; pass an
/// empty span for scale = max |w|). Flank context over W samples: N when the
/// flank starts with N and shows fewer than k_x alternations (Z entries or
/// sign changes), X otherwise; a flank cut off by the end of the trace is Z.
/// Throws ZeroError when the trace has fewer than 2W + 1 samples.
MomentClassification classify_moments(std::span<const double> t, std::span<const double> w,
                                       std::span<const double> scale, double tau_z, int window, int alternations,
                                       int side = 1);

}  // namespace zlab
