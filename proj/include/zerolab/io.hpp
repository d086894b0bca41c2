#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zerolab/harness.hpp"
#include "zerolab/solver.hpp"
#include "zerolab/zeros.hpp"

namespace zlab::io {

namespace fs = std::filesystem;

/// Long format: header "t,x,u", one row per node and snapshot.
void write_trajectory_csv(const Trajectory& traj, const fs::path& path);

/// Binary dump, little-endian:
///   char[8]  "ZLABSNP1"
///   uint64   M       nodes per snapshot
///   uint64   count   number of snapshots
///   count rows of (1 + 2M) doubles: t, x[0..M), u[0..M)
void write_snapshot_dump(const Trajectory& traj, const fs::path& path);
std::vector<Snapshot> read_snapshot_dump(const fs::path& path);

/// "t,g,h,Q"
void write_front_csv(const Trajectory& traj, const fs::path& path);

/// "t,Z"
void write_zero_count_csv(const ZeroTrace& zt, const fs::path& path);

/// Per-snapshot summary "t,Z,w1,w2" plus ",g,h,Q" for free boundaries.
/// Rows without a zero inventory (skipped samples) carry an empty Z.
void write_trace_csv(const Trajectory& traj, const ZeroTrace& zt, const fs::path& path);

/// One JSON object per line: {"t": .., "type": .., "payload": {..}} with
/// type drop, merge, boundary-exit or moment-label, sorted by t.
std::vector<std::string> event_lines(const ZeroTrace& zt, const std::vector<MomentClassification>& moments);
void write_event_log(const ZeroTrace& zt, const std::vector<MomentClassification>& moments, const fs::path& path);

void write_report(const std::vector<harness::CheckReport>& reports, const fs::path& path);

/// Static SVG figures.
void plot_zero_count(const ZeroTrace& zt, const fs::path& path);
void plot_zero_curves(const ZeroTrace& zt, const fs::path& path);
void plot_fronts(const Trajectory& traj, const fs::path& path);

/// Shortest round-trip decimal form of a double.
std::string fmt(double v);

}  // namespace zlab::io
