#include "zerolab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zerolab/error.hpp"

namespace zlab {

bool ZeroInventory::has_multiple() const {
  return std::any_of(zeros.begin(), zeros.end(), [](const Zero& z) { return z.kind == ZeroKind::Multiple; });
}

bool ZeroInventory::has_interior_multiple() const {
  return std::any_of(zeros.begin(), zeros.end(),
                     [](const Zero& z) { return z.kind == ZeroKind::Multiple && !z.at_boundary; });
}

ZeroInventory count_zeros(const Snapshot& snap, double tau_z, double tau_d) {
  const auto u = snap.values();
  const auto x = snap.nodes();
  const auto ux = snap.derivative();
  const std::size_t n = u.size();
  const double scale = snap.scale();
  const double dx = snap.spacing();
  const double eps = tau_z * scale;

  ZeroInventory inv;
  inv.t = snap.time();
  inv.left = x.front();
  inv.right = x.back();
  inv.spacing = dx;

  std::vector<bool> near(n);
  bool any_far = false;
  for (std::size_t j = 0; j < n; ++j) {
    near[j] = std::abs(u[j]) <= eps;
    any_far = any_far || !near[j];
  }
  if (!any_far || scale == 0.0) throw ZeroError("profile == 0 within tolerance at t=" + std::to_string(snap.time()));

  const double slope_tol = tau_d * scale / dx;
  std::size_t j = 0;
  while (j < n) {
    if (!near[j]) {
      if (j + 1 < n && !near[j + 1] && (u[j] > 0) != (u[j + 1] > 0)) {
        const double root = x[j] + (x[j + 1] - x[j]) * u[j] / (u[j] - u[j + 1]);
        inv.zeros.push_back({root, ZeroKind::Simple, false, std::abs((u[j + 1] - u[j]) / (x[j + 1] - x[j]))});
      }
      ++j;
      continue;
    }
    std::size_t k = j;
    double min_slope = std::numeric_limits<double>::infinity();
    while (k < n && near[k]) {
      min_slope = std::min(min_slope, std::abs(ux[k]));
      ++k;
    }
    const std::size_t last = k - 1;
    Zero z;
    z.slope = min_slope;
    z.at_boundary = j == 0 || last == n - 1;
    if (j == 0)
      z.location = x.front();
    else if (last == n - 1)
      z.location = x.back();
    else
      z.location = 0.5 * (x[j] + x[last]);
    bool same_flanks = false;
    if (j > 0 && last + 1 < n) same_flanks = (u[j - 1] > 0) == (u[last + 1] > 0);
    z.kind = (min_slope <= slope_tol || same_flanks) ? ZeroKind::Multiple : ZeroKind::Simple;
    inv.zeros.push_back(z);
    j = k;
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Curves

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::Merge: return "merge";
    case WitnessKind::BoundaryExit: return "boundary-exit";
    case WitnessKind::Vanish: return "vanish";
  }
  return "vanish";
}

std::vector<double> ZeroTrace::times() const {
  std::vector<double> out;
  for (const auto& i : inventories) out.push_back(i.t);
  return out;
}

std::vector<int> ZeroTrace::counts() const {
  std::vector<int> out;
  for (const auto& i : inventories) out.push_back(i.count());
  return out;
}

namespace {

// Order-preserving matching: maximize pairs, then minimize displacement.
// Returns for each previous index the matched current index or -1.
std::vector<int> match(const std::vector<double>& prev, const std::vector<double>& cur, double radius,
                       bool* ambiguous) {
  const std::size_t p = prev.size(), c = cur.size();
  struct Cell {
    int pairs = 0;
    double cost = 0.0;
  };
  auto better = [](const Cell& a, const Cell& b) {
    return a.pairs > b.pairs || (a.pairs == b.pairs && a.cost < b.cost - 1e-15);
  };
  std::vector<std::vector<Cell>> dp(p + 1, std::vector<Cell>(c + 1));
  std::vector<std::vector<char>> move(p + 1, std::vector<char>(c + 1, 0));
  *ambiguous = false;
  for (std::size_t i = 1; i <= p; ++i)
    for (std::size_t j = 1; j <= c; ++j) {
      Cell best = dp[i - 1][j];
      char mv = 'u';
      if (better(dp[i][j - 1], best)) {
        best = dp[i][j - 1];
        mv = 'l';
      }
      const double d = std::abs(prev[i - 1] - cur[j - 1]);
      if (d <= radius) {
        Cell m{dp[i - 1][j - 1].pairs + 1, dp[i - 1][j - 1].cost + d};
        if (better(m, best)) {
          best = m;
          mv = 'd';
        }
      }
      dp[i][j] = best;
      move[i][j] = mv;
    }
  for (std::size_t i = 0; i < p; ++i) {
    int within = 0;
    for (double v : cur)
      if (std::abs(prev[i] - v) <= radius) ++within;
    if (within > 1) *ambiguous = true;
  }
  std::vector<int> out(p, -1);
  std::size_t i = p, j = c;
  while (i > 0 && j > 0) {
    if (move[i][j] == 'd') {
      out[i - 1] = static_cast<int>(j - 1);
      --i;
      --j;
    } else if (move[i][j] == 'u') {
      --i;
    } else {
      --j;
    }
  }
  return out;
}

}  // namespace

ZeroTrace trace_zero_curves(std::vector<ZeroInventory> inventories, const TraceOptions& opts) {
  ZeroTrace zt;
  zt.inventories = std::move(inventories);
  if (zt.inventories.empty()) return zt;

  std::vector<int> active;  // curve index per zero of the previous inventory
  auto start_curve = [&](double t, double x) {
    const int id = static_cast<int>(zt.curves.size());
    zt.curves.push_back(ZeroCurve{id, {t}, {x}, false});
    return id;
  };
  for (const auto& z : zt.inventories.front().zeros) active.push_back(start_curve(zt.inventories.front().t, z.location));

  for (std::size_t k = 1; k < zt.inventories.size(); ++k) {
    const auto& a = zt.inventories[k - 1];
    const auto& b = zt.inventories[k];
    std::vector<double> prev, cur;
    for (const auto& z : a.zeros) prev.push_back(z.location);
    for (const auto& z : b.zeros) cur.push_back(z.location);
    bool ambiguous = false;
    const double radius = opts.match_radius * (b.right - b.left);
    const auto m = match(prev, cur, radius, &ambiguous);
    if (ambiguous) {
      std::ostringstream os;
      os << "t=" << b.t << ": ambiguous zero matching resolved by order";
      zt.notes.push_back(os.str());
    }
    std::vector<int> next(cur.size(), -1);
    std::vector<std::size_t> vanished;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      auto& curve = zt.curves[static_cast<std::size_t>(active[i])];
      if (m[i] >= 0) {
        next[static_cast<std::size_t>(m[i])] = active[i];
        curve.t.push_back(b.t);
        curve.x.push_back(cur[static_cast<std::size_t>(m[i])]);
      } else {
        curve.ended = true;
        vanished.push_back(i);
      }
    }
    for (std::size_t j = 0; j < cur.size(); ++j)
      if (next[j] < 0) next[j] = start_curve(b.t, cur[j]);

    if (b.count() < a.count()) {
      DropEvent ev;
      ev.t_before = a.t;
      ev.t_after = b.t;
      ev.z_before = a.count();
      ev.z_after = b.count();
      for (std::size_t i : vanished) ev.locations.push_back(prev[i]);
      // Two vanished curves with no surviving zero between them merged.
      bool merged = false;
      for (std::size_t q = 1; q < vanished.size(); ++q)
        if (vanished[q] == vanished[q - 1] + 1) merged = true;
      if (merged) {
        ev.witness = WitnessKind::Merge;
      } else if (!vanished.empty()) {
        ev.witness = WitnessKind::Vanish;
        for (std::size_t i : vanished) {
          const double x = prev[i];
          if (std::min(x - b.left, b.right - x) <= radius) ev.witness = WitnessKind::BoundaryExit;
        }
      }
      const bool adjacent = !zt.drops.empty() && zt.drops.back().t_after == a.t;
      if (adjacent) {
        auto& last = zt.drops.back();
        last.t_after = b.t;
        last.z_after = b.count();
        last.locations.insert(last.locations.end(), ev.locations.begin(), ev.locations.end());
        if (ev.witness == WitnessKind::Merge || last.witness == WitnessKind::Vanish) last.witness = ev.witness;
      } else {
        zt.drops.push_back(std::move(ev));
      }
    }
    active = std::move(next);
  }
  return zt;
}

// ---------------------------------------------------------------------------
// Moments

char letter(Context c) {
  switch (c) {
    case Context::N: return 'N';
    case Context::Z: return 'Z';
    case Context::X: return 'X';
  }
  return '?';
}

std::vector<std::string> ZRun::labels() const {
  const std::string l(1, letter(left)), r(1, letter(right));
  if (samples() <= 1) return {l + "Z" + r};
  std::vector<std::string> out{l + "ZZ"};
  if (samples() > 2) out.push_back("ZZZ");
  out.push_back("ZZ" + r);
  return out;
}

std::set<std::string> MomentClassification::label_set() const {
  std::set<std::string> s;
  if (n_zero_samples < n_samples) s.insert("N");
  for (const auto& r : runs)
    for (auto& l : r.labels()) s.insert(l);
  return s;
}

int MomentClassification::count(const std::string& label) const {
  int k = 0;
  for (const auto& r : runs)
    for (auto& l : r.labels())
      if (l == label) ++k;
  return k;
}

MomentClassification classify_moments(std::span<const double> t, std::span<const double> w,
                                       std::span<const double> scale, double tau_z, int window, int alternations,
                                       int side) {
  const std::size_t n = w.size();
  if (window < 1 || n < static_cast<std::size_t>(2 * window + 1))
    throw ZeroError("boundary trace has " + std::to_string(n) + " samples, need at least 2W+1 = " +
                    std::to_string(2 * window + 1));
  if (t.size() != n || (!scale.empty() && scale.size() != n))
    throw ZeroError("boundary trace arrays differ in length");

  MomentClassification mc;
  mc.side = side;
  mc.tau_z = tau_z;
  mc.window = window;
  mc.alternations = alternations;
  mc.n_samples = n;

  double global = 0.0;
  for (double v : w) global = std::max(global, std::abs(v));
  std::vector<bool> zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = scale.empty() ? global : scale[i];
    zero[i] = std::abs(w[i]) <= tau_z * s;
    if (zero[i]) ++mc.n_zero_samples;
  }

  // Flank context starting at sample `from`, walking in direction dir.
  auto context = [&](long from, int dir) {
    if (from < 0 || from >= static_cast<long>(n)) return Context::Z;
    if (zero[static_cast<std::size_t>(from)]) return Context::Z;
    int changes = 0;
    long prev = from;
    for (int k = 1; k < window; ++k) {
      const long i = from + dir * k;
      if (i < 0 || i >= static_cast<long>(n)) break;
      const auto a = static_cast<std::size_t>(prev), b = static_cast<std::size_t>(i);
      if (zero[a] != zero[b])
        ++changes;
      else if (!zero[a] && (w[a] > 0) != (w[b] > 0))
        ++changes;
      prev = i;
    }
    return changes >= alternations ? Context::X : Context::N;
  };

  std::size_t i = 0;
  while (i < n) {
    if (zero[i]) {
      std::size_t k = i;
      while (k + 1 < n && zero[k + 1]) ++k;
      ZRun r;
      r.first = i;
      r.last = k;
      r.t_start = t[i];
      r.t_end = t[k];
      r.left = context(static_cast<long>(i) - 1, -1);
      r.right = context(static_cast<long>(k) + 1, +1);
      mc.runs.push_back(r);
      i = k + 1;
      continue;
    }
    if (i + 1 < n && !zero[i + 1] && (w[i] > 0) != (w[i + 1] > 0)) {
      ZRun r;
      r.between = true;
      r.first = i + 1;
      r.last = i;
      r.t_start = r.t_end = t[i] + (t[i + 1] - t[i]) * w[i] / (w[i] - w[i + 1]);
      r.left = context(static_cast<long>(i), -1);
      r.right = context(static_cast<long>(i) + 1, +1);
      mc.runs.push_back(r);
    }
    ++i;
  }

  // A-type intervals around every Z-run flanked by N on both sides.
  for (std::size_t q = 0; q < mc.runs.size(); ++q) {
    const auto& r = mc.runs[q];
    if (r.left != Context::N || r.right != Context::N) continue;
    const double lo = q > 0 ? mc.runs[q - 1].t_end : t.front();
    const double hi = q + 1 < mc.runs.size() ? mc.runs[q + 1].t_start : t.back();
    mc.a_intervals.push_back({lo, r.t_start, r.t_end, hi});
  }
  return mc;
}

}  // namespace zlab
