#include "zerolab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zerolab/error.hpp"
#include "zerolab/transform.hpp"

namespace zlab::harness {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// Typical spacing of the snapshot times.
double output_step(const std::vector<double>& t) {
  if (t.size() < 2) return 0.0;
  return t[1] - t[0];
}

bool drop_near(const ZeroTrace& zt, double lo, double hi) {
  for (const auto& d : zt.drops)
    if (d.t_after >= lo && d.t_before <= hi) return true;
  return false;
}

}  // namespace

void CheckReport::param(const std::string& key, double value) { params.emplace_back(key, num(value)); }
void CheckReport::param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }

void CheckReport::violate(double t, std::string expected, std::string observed) {
  violations.push_back({t, std::move(expected), std::move(observed)});
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << "check: " << name << "\n";
  os << "status: " << (passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& [k, v] : params) os << "param: " << k << " = " << v << "\n";
  for (const auto& v : violations)
    os << "violation: t=" << num(v.t) << " expected=\"" << v.expected << "\" observed=\"" << v.observed << "\"\n";
  for (const auto& n : notes) os << "note: " << n << "\n";
  return os.str();
}

CheckReport check_monotone(const ZeroTrace& zt, double burn_in) {
  CheckReport r;
  r.name = "monotone";
  r.param("burn_in", burn_in);
  const auto& inv = zt.inventories;
  for (std::size_t k = 1; k < inv.size(); ++k) {
    if (inv[k - 1].t < burn_in) continue;
    if (inv[k].count() > inv[k - 1].count())
      r.violate(inv[k].t, "Z(t2) <= Z(t1)",
                "Z " + std::to_string(inv[k - 1].count()) + " -> " + std::to_string(inv[k].count()) + " after t=" +
                    num(inv[k - 1].t));
  }
  return r;
}

CheckReport check_strict_drop(const ZeroTrace& zt, const std::vector<MomentClassification>& moments,
                              const DropOptions& opts) {
  CheckReport r;
  r.name = "strict-drop";
  r.param("burn_in", opts.burn_in);
  r.param("window", opts.window);
  const auto t = zt.times();
  if (t.empty()) return r;
  const double step = output_step(t);
  const double reach = opts.window * step;
  const double end = t.back();

  // A boundary zero inside a ZZ run of its side (a Dirichlet end, say) is
  // there for the whole run; only multiple zeros away from such runs count.
  auto in_zz_run = [&](int side, double when) {
    for (const auto& mc : moments) {
      if (mc.side != side) continue;
      for (const auto& run : mc.runs)
        if (run.samples() >= 2 && run.t_start <= when && when <= run.t_end) return true;
    }
    return false;
  };
  int excluded = 0;
  auto flagged = [&](std::size_t k) {
    const auto& inv = zt.inventories[k];
    bool any = false;
    for (const auto& z : inv.zeros) {
      if (z.kind != ZeroKind::Multiple) continue;
      if (z.at_boundary && in_zz_run(z.location == inv.left ? 1 : 2, inv.t)) {
        ++excluded;
        continue;
      }
      any = true;
    }
    return any;
  };

  // Consecutive samples flagged with a multiple zero form one band: the
  // degenerate instant is resolved only up to the slope tolerance.
  int multiples = 0, skipped = 0;
  for (std::size_t k = 0; k < t.size();) {
    if (t[k] < opts.burn_in || !flagged(k)) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e + 1 < t.size() && flagged(e + 1)) ++e;
    ++multiples;
    if (t[e] + reach > end && !drop_near(zt, t[k] - reach, end)) {
      ++skipped;
    } else if (!drop_near(zt, t[k] - reach, t[e] + reach)) {
      std::string where;
      for (const auto& z : zt.inventories[k].zeros)
        if (z.kind == ZeroKind::Multiple) where += num(z.location) + " ";
      r.violate(t[k], "drop within the window around a multiple zero",
                "multiple zero at x= " + where + "until t=" + num(t[e]) + ", no drop");
    }
    k = e + 1;
  }

  // Count bound: Z is read at the last sample not after burn-in and every
  // NZN/ZZN moment from that sample on must be paid for by a drop.
  double t_ref = zt.inventories.front().t;
  int z0 = zt.inventories.front().count();
  for (const auto& inv : zt.inventories) {
    if (inv.t > opts.burn_in) break;
    t_ref = inv.t;
    z0 = inv.count();
  }

  int boundary = 0;
  for (const auto& mc : moments)
    for (const auto& run : mc.runs) {
      if (run.right != Context::N) continue;
      const bool nzn = run.left == Context::N && run.samples() <= 1;
      const bool zzn = run.samples() >= 2;
      if (!nzn && !zzn) continue;
      const double s = nzn ? run.t_start : run.t_end;
      if (s >= t_ref) ++boundary;
      if (s < opts.burn_in) continue;
      if (s + reach > end) {
        ++skipped;
        continue;
      }
      if (!drop_near(zt, s - reach, s + reach))
        r.violate(s, "drop after a " + std::string(nzn ? "NZN" : "ZZN") + " moment",
                  "side " + std::to_string(mc.side) + ": no drop within the window");
    }

  r.param("count_reference_t", t_ref);
  if (boundary > z0)
    r.violate(t_ref, "NZN + ZZN moments from t=" + num(t_ref) + " <= Z = " + std::to_string(z0),
              std::to_string(boundary) + " moments");
  r.param("multiple_zero_bands", multiples);
  r.param("boundary_multiples_in_zz_runs", excluded);
  r.param("boundary_moments", boundary);
  if (skipped) r.notes.push_back(std::to_string(skipped) + " moments too close to the end of the run were not attributed");
  return r;
}

CheckReport check_hypotheses(const Trajectory& traj, const std::vector<MomentClassification>& moments,
                             const HypothesisOptions& opts, HypothesisSummary* summary) {
  CheckReport r;
  r.name = "hypotheses";
  r.param("tau_d", opts.tau_d);
  r.param("window", opts.window);
  HypothesisSummary sum;
  const double dx = traj.snapshots.empty() ? 1.0 : traj.snapshots.front().spacing();

  for (const auto& mc : moments) {
    const BoundaryTrace& tr = mc.side == 1 ? traj.left : traj.right;
    const int i = mc.side;
    const double sign_i = i == 1 ? -1.0 : 1.0;
    const std::size_t n = tr.size();
    const std::string side = "side " + std::to_string(i) + ": ";
    for (const auto& run : mc.runs) {
      // (H1)
      if (run.samples() >= 3) {
        ++sum.h1_runs;
        std::vector<double> d;
        for (std::size_t k = run.first; k < run.last; ++k)
          d.push_back((tr.position[k + 1] - tr.position[k]) / (tr.t[k + 1] - tr.t[k]));
        double big = 0;
        for (double v : d) big = std::max(big, std::abs(v));
        for (std::size_t k = 1; k < d.size(); ++k)
          if (std::abs(d[k] - d[k - 1]) > opts.h1_rel * big + 1e-12) {
            ++sum.h1_failed;
            r.violate(tr.t[run.first + k], "(H1) endpoint C1 on the Z-run",
                      side + "slope jumps " + num(d[k - 1]) + " -> " + num(d[k]));
            break;
          }
      }
      // (H2) at NZ* moments
      if (run.left == Context::N && run.t_start >= opts.burn_in && run.first >= 1 && run.first < n) {
        ++sum.h2_checked;
        const std::size_t b = run.first - 1;
        double slope, scale;
        if (run.between) {
          const double th = (run.t_start - tr.t[b]) / (tr.t[b + 1] - tr.t[b]);
          slope = (1 - th) * tr.slope[b] + th * tr.slope[b + 1];
          scale = std::max(tr.scale[b], tr.scale[b + 1]);
        } else {
          slope = tr.slope[run.first];
          scale = tr.scale[run.first];
        }
        const double sigma = sgn(tr.value[b]);
        const double tol = opts.tau_d * scale / dx;
        if (sigma * sign_i * slope < -tol) {
          ++sum.h2_failed;
          r.violate(run.t_start, "(H2) sign(w before) (-1)^i u_x >= 0",
                    side + "w before " + num(tr.value[b]) + ", u_x " + num(slope));
        }
      }
      // (H3) and (H3)* after Z-moments followed by N
      if (run.right == Context::N && run.t_end >= opts.burn_in) {
        std::size_t k0;
        double inner_s, scale;
        if (run.between) {
          const std::size_t b = run.first - 1;
          const double th = (run.t_end - tr.t[b]) / (tr.t[b + 1] - tr.t[b]);
          inner_s = (1 - th) * tr.inner[b] + th * tr.inner[b + 1];
          scale = std::max(tr.scale[b], tr.scale[b + 1]);
          k0 = run.first;
        } else {
          inner_s = tr.inner[run.last];
          scale = tr.scale[run.last];
          k0 = run.last + 1;
        }
        if (k0 >= n) continue;
        ++sum.h3_checked;
        bool h3 = true, h3s = true;
        for (std::size_t k = k0; k < n && tr.t[k] <= run.t_end + opts.window; ++k) {
          if (tr.value[k] * inner_s < -1e-8 * scale * scale) h3 = false;
          if (sign_i * tr.value[k] * tr.slope[k] > opts.tau_d * scale * scale / dx) h3s = false;
        }
        if (!h3) ++sum.h3_failed;
        if (!h3s) ++sum.h3star_failed;
        if (!h3 && !h3s)
          r.violate(run.t_end, "(H3) or (H3)* after the Z-moment", side + "both sign conditions fail");
      }
    }
  }
  r.param("h2_checked", sum.h2_checked);
  r.param("h3_checked", sum.h3_checked);
  r.param("h3_failed", sum.h3_failed);
  r.param("h3star_failed", sum.h3star_failed);
  if (summary) *summary = sum;
  return r;
}

CheckReport check_taxonomy(const std::vector<MomentClassification>& moments) {
  CheckReport r;
  r.name = "taxonomy";
  static const std::set<std::string> allowed{"N", "NZN", "NZZ", "ZZN", "ZZZ"};
  std::string seen;
  for (const auto& mc : moments) {
    for (const auto& l : mc.label_set()) seen += std::to_string(mc.side) + ":" + l + " ";
    for (const auto& run : mc.runs)
      for (const auto& l : run.labels())
        if (!allowed.count(l))
          r.violate(run.t_start, "labels in {N, NZN, NZZ, ZZN, ZZZ}", "side " + std::to_string(mc.side) + ": " + l);
  }
  r.param("labels", seen);
  return r;
}

CheckReport check_isolated_moments(const std::vector<MomentClassification>& moments) {
  CheckReport r;
  r.name = "isolated-moments";
  for (const auto& mc : moments)
    for (const auto& run : mc.runs)
      if (run.samples() > 1)
        r.violate(run.t_start, "boundary Z-run of at most one sample",
                  "side " + std::to_string(mc.side) + ": " + std::to_string(run.samples()) + " samples up to t=" +
                      num(run.t_end));
  return r;
}

CheckReport check_split(const Trajectory& traj, double tau_z, double tau_d, double burn_in) {
  CheckReport r;
  r.name = "split";
  const auto& s = traj.snapshots;
  int brackets = 0;
  auto part = [](const Snapshot& snap, std::size_t a, std::size_t b) {
    const auto x = snap.nodes();
    const auto u = snap.values();
    return Snapshot(snap.time(), std::vector<double>(x.begin() + long(a), x.begin() + long(b) + 1),
                    std::vector<double>(u.begin() + long(a), u.begin() + long(b) + 1));
  };
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (s[k].time() < burn_in || s[k].size() != s[k + 1].size()) continue;
    const std::size_t j = transform::choose_split_point(s[k]);
    const std::size_t n = s[k].size();
    if (j < 2 || j + 3 > n) continue;
    const double a = s[k].values()[j], b = s[k + 1].values()[j];
    if (std::abs(a) <= tau_z * s[k].scale() || std::abs(b) <= tau_z * s[k + 1].scale() || (a > 0) != (b > 0)) continue;
    ++brackets;
    try {
      const int l0 = count_zeros(part(s[k], 0, j), tau_z, tau_d).count();
      const int l1 = count_zeros(part(s[k + 1], 0, j), tau_z, tau_d).count();
      const int r0 = count_zeros(part(s[k], j, n - 1), tau_z, tau_d).count();
      const int r1 = count_zeros(part(s[k + 1], j, n - 1), tau_z, tau_d).count();
      if (l1 > l0)
        r.violate(s[k + 1].time(), "Z on [xi1, X] non-increasing", std::to_string(l0) + " -> " + std::to_string(l1));
      if (r1 > r0)
        r.violate(s[k + 1].time(), "Z on [X, xi2] non-increasing", std::to_string(r0) + " -> " + std::to_string(r1));
    } catch (const ZeroError&) {
      // A sub-interval can be identically zero under Dirichlet data; skip it.
    }
  }
  r.param("brackets", brackets);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void push_trace(Trajectory& tr, const Snapshot& snap) {
  const auto v = snap.values();
  const double dx = snap.spacing();
  const std::size_t n = v.size();
  tr.left.push(snap.time(), v.front(), v[1], one_sided_slope(v, dx, 1), snap.scale(), snap.left());
  tr.right.push(snap.time(), v.back(), v[n - 2], one_sided_slope(v, dx, 2), snap.scale(), snap.right());
}

// Cubic Lagrange stencil around x: first index and the four weights and
// derivative weights.
struct Stencil {
  std::size_t first;
  double w[4], d[4];
};

Stencil stencil(std::span<const double> xs, double x) {
  const std::size_t n = xs.size();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t j = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  std::size_t first = j == 0 ? 0 : j - 1;
  first = std::min(first, n >= 4 ? n - 4 : 0);
  Stencil s{first, {}, {}};
  const std::size_t m = std::min<std::size_t>(4, n);
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = xs[first + i];
    double w = 1.0, d = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      if (q == i) continue;
      const double den = xi - xs[first + q];
      double term = 1.0 / den;
      for (std::size_t l = 0; l < m; ++l)
        if (l != i && l != q) term *= (x - xs[first + l]) / (xi - xs[first + l]);
      d += term;
      w *= (x - xs[first + q]) / den;
    }
    s.w[i] = w;
    s.d[i] = d;
  }
  for (std::size_t i = m; i < 4; ++i) s.w[i] = s.d[i] = 0.0;
  return s;
}

}  // namespace

double interpolate(const Snapshot& p, double x) {
  if (x < p.left() || x > p.right()) return 0.0;
  const auto s = stencil(p.nodes(), x);
  const auto u = p.values();
  double v = 0.0;
  for (std::size_t i = 0; i < 4 && s.first + i < u.size(); ++i) v += s.w[i] * u[s.first + i];
  return v;
}

double reflection_center_slope(const Snapshot& p, double x0) {
  const auto s = stencil(p.nodes(), x0);
  const auto u = p.values();
  double v = 0.0;
  for (std::size_t i = 0; i < 4 && s.first + i < u.size(); ++i) v += s.d[i] * u[s.first + i];
  return 2.0 * v;
}

Difference build_shift_difference(const Trajectory& traj, double s, double period) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 2) throw HarnessError("shift difference needs at least two snapshots");
  const double step = snaps[1].time() - snaps[0].time();
  const long p = std::lround(period / step);
  if (p < 1 || std::abs(double(p) * step - period) > 1e-6 * period)
    throw HarnessError("period " + num(period) + " is not a multiple of the snapshot spacing " + num(step));
  const double t0 = snaps.front().time() + s;
  Difference out;
  out.traj.meta = traj.meta;
  for (std::size_t k = 0; k + static_cast<std::size_t>(p) < snaps.size(); ++k) {
    const auto& a = snaps[k];
    if (a.time() < t0 - 1e-12) continue;
    const auto& b = snaps[k + static_cast<std::size_t>(p)];
    if (a.size() != b.size()) throw HarnessError("shift difference needs a fixed grid");
    for (std::size_t j = 0; j < a.size(); ++j)
      if (std::abs(a.nodes()[j] - b.nodes()[j]) > 1e-12 * (1 + std::abs(a.nodes()[j])))
        throw HarnessError("shift difference needs a fixed grid");
    std::vector<double> eta(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) eta[j] = b.values()[j] - a.values()[j];
    Snapshot d(a.time(), std::vector<double>(a.nodes().begin(), a.nodes().end()), std::move(eta));
    out.degenerate.push_back(d.scale() <= 1e-10 * std::max(a.scale(), b.scale()));
    push_trace(out.traj, d);
    out.traj.snapshots.push_back(std::move(d));
  }
  if (out.traj.snapshots.empty()) throw HarnessError("horizon too short for the shift difference");
  return out;
}

Difference build_reflection_difference(const Trajectory& traj, double x0, int nodes) {
  Difference out;
  out.traj.meta = traj.meta;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& p = traj.snapshots[k];
    const double g = traj.fronts.empty() ? p.left() : traj.fronts.g[k];
    const double h = traj.fronts.empty() ? p.right() : traj.fronts.h[k];
    const double xi1 = std::max(g - x0, x0 - h), xi2 = std::min(h - x0, x0 - g);
    if (!(xi2 > xi1)) throw HarnessError("common interval empty at t=" + num(p.time()));
    const std::size_t m = nodes > 0 ? static_cast<std::size_t>(nodes) : p.size();
    std::vector<double> x(m), eta(m);
    for (std::size_t j = 0; j < m; ++j) {
      x[j] = xi1 + (xi2 - xi1) * double(j) / double(m - 1);
      eta[j] = interpolate(p, x0 + x[j]) - interpolate(p, x0 - x[j]);
    }
    x.back() = xi2;
    Snapshot d(p.time(), std::move(x), std::move(eta));
    out.degenerate.push_back(d.scale() <= 1e-10 * std::max(p.scale(), 1e-300));
    push_trace(out.traj, d);
    out.traj.snapshots.push_back(std::move(d));
  }
  return out;
}

Snapshot restrict_to(const Snapshot& snap, double x_max) {
  const auto x = snap.nodes();
  const auto u = snap.values();
  std::size_t n = 0;
  while (n < x.size() && x[n] <= x_max + 1e-12) ++n;
  n = std::max<std::size_t>(n, 3);
  return Snapshot(snap.time(), std::vector<double>(x.begin(), x.begin() + long(n)),
                  std::vector<double>(u.begin(), u.begin() + long(n)));
}

Analysis analyze(const Trajectory& traj, const Tolerances& tol, std::optional<double> window,
                 const std::vector<bool>* skip) {
  std::vector<ZeroInventory> inv;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    if (skip && k < skip->size() && (*skip)[k]) continue;
    const auto& s = traj.snapshots[k];
    if (window)
      inv.push_back(count_zeros(restrict_to(s, s.left() + *window), tol.zero, tol.degenerate));
    else
      inv.push_back(count_zeros(s, tol.zero, tol.degenerate));
  }
  Analysis a;
  a.zeros = trace_zero_curves(std::move(inv));
  a.moments.push_back(classify_moments(traj.left.t, traj.left.value, traj.left.scale, tol.zero, tol.moment_window,
                                       tol.alternations, 1));
  a.moments.push_back(classify_moments(traj.right.t, traj.right.value, traj.right.scale, tol.zero,
                                       tol.moment_window, tol.alternations, 2));
  return a;
}

}  // namespace zlab::harness
