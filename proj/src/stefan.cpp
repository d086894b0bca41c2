#include "zerolab/stefan.hpp"

#include <algorithm>
#include <cmath>

#include "zerolab/error.hpp"

namespace zlab::stefan {

double boundary_slope(const FreeBoundaryState& state, int side) {
  return one_sided_slope(state.profile.values(), state.profile.spacing(), side);
}

double conserved_quantity(const Snapshot& p, const FrontParams& params) {
  const auto u = p.values();
  const double dx = p.spacing();
  double mass = 0.5 * (u.front() + u.back());
  for (std::size_t j = 1; j + 1 < u.size(); ++j) mass += u[j];
  return mass * dx + p.right() / params.mu_right - p.left() / params.mu_left;
}

FreeBoundaryState make_state(Snapshot profile, const FrontParams& params) {
  const double g = profile.left(), h = profile.right();
  const double q = conserved_quantity(profile, params);
  return FreeBoundaryState{g, h, std::move(profile), q, false};
}

namespace {

Snapshot on_interval(double t, double g, double h, std::vector<double> w) {
  const std::size_t n = w.size();
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = g + (h - g) * double(j) / double(n - 1);
  x.back() = h;
  return Snapshot(t, std::move(x), std::move(w));
}

// Advance w from [g0, h0] at t to [g1, h1] at t + dt with constant front
// velocities (g1 - g0) / dt and (h1 - h0) / dt.
std::vector<double> move(std::span<const double> w, double t, double dt, double g0, double h0, double g1, double h1,
                         const CoefficientField& field, double theta) {
  const std::size_t n = w.size();
  const double hy = 1.0 / double(n - 1);
  const double tm = t + 0.5 * dt;
  const double gm = 0.5 * (g0 + g1), L = 0.5 * ((h0 - g0) + (h1 - g1));
  const double vg = (g1 - g0) / dt, vh = (h1 - h0) / dt;
  solver::detail::LevelCoefficients co;
  co.a.resize(n);
  co.b.resize(n);
  co.c.resize(n);
  std::vector<double> xm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = double(j) * hy;
    xm[j] = gm + L * y;
    co.a[j] = field.a(xm[j], tm) / (L * L);
    co.b[j] = (field.b(xm[j], tm) + vg * (1.0 - y) + vh * y) / L;
    co.c[j] = field.c(xm[j], tm);
  }
  solver::detail::SideRow lo, ro, ln, rn;
  lo.t = ro.t = t;
  ln.t = rn.t = t + dt;
  solver::StepOptions opts;
  opts.theta = theta;
  if (!field.f) return solver::detail::theta_step(w, hy, co, lo, ro, ln, rn, {}, dt, opts, nullptr);
  std::vector<double> src(n);
  for (std::size_t j = 0; j < n; ++j) src[j] = (*field.f)(xm[j], tm, w[j]);
  const auto pred = solver::detail::theta_step(w, hy, co, lo, ro, ln, rn, src, dt, opts, nullptr);
  for (std::size_t j = 0; j < n; ++j) src[j] = (*field.f)(xm[j], tm, 0.5 * (w[j] + pred[j]));
  return solver::detail::theta_step(w, hy, co, lo, ro, ln, rn, src, dt, opts, nullptr);
}

}  // namespace

FreeBoundaryState step_free_boundary(const FreeBoundaryState& s, const CoefficientField& field, double dt,
                                     const FrontParams& params, double theta) {
  if (s.extinct) return s;
  const double t = s.time();
  const auto w = s.profile.values();
  const std::size_t n = w.size();
  const double cell = (s.h - s.g) / double(n - 1);
  auto check_cfl = [&](double dg, double dh) {
    if (std::abs(dg) > cell || std::abs(dh) > cell)
      throw StefanError("front CFL violated at t=" + std::to_string(t) + ": front moves " +
                        std::to_string(std::max(std::abs(dg), std::abs(dh))) + " > cell " + std::to_string(cell));
  };

  const double vg0 = -params.mu_left * boundary_slope(s, 1);
  const double vh0 = -params.mu_right * boundary_slope(s, 2);
  double g1 = s.g + dt * vg0, h1 = s.h + dt * vh0;
  check_cfl(g1 - s.g, h1 - s.h);
  if (h1 - g1 <= params.min_gap) {
    FreeBoundaryState out = s;
    out.extinct = true;
    return out;
  }
  const auto wp = move(w, t, dt, s.g, s.h, g1, h1, field, theta);
  const Snapshot pred = on_interval(t + dt, g1, h1, wp);
  const double vg1 = -params.mu_left * one_sided_slope(pred.values(), pred.spacing(), 1);
  const double vh1 = -params.mu_right * one_sided_slope(pred.values(), pred.spacing(), 2);
  g1 = s.g + 0.5 * dt * (vg0 + vg1);
  h1 = s.h + 0.5 * dt * (vh0 + vh1);
  check_cfl(g1 - s.g, h1 - s.h);
  if (h1 - g1 <= params.min_gap) {
    FreeBoundaryState out = s;
    out.extinct = true;
    return out;
  }
  auto wc = move(w, t, dt, s.g, s.h, g1, h1, field, theta);
  wc.front() = 0.0;
  wc.back() = 0.0;
  return make_state(on_interval(t + dt, g1, h1, std::move(wc)), params);
}

Trajectory FreeBoundaryRun::to_trajectory() const {
  Trajectory tr;
  tr.meta = meta;
  tr.left = left;
  tr.right = right;
  for (const auto& s : states) {
    tr.snapshots.push_back(s.profile);
    tr.fronts.g.push_back(s.g);
    tr.fronts.h.push_back(s.h);
    tr.fronts.q.push_back(s.q);
  }
  return tr;
}

FreeBoundaryRun solve_free_boundary(const ScenarioConfig& cfg) {
  if (!cfg.is_free_boundary()) throw StefanError("scenario has no free boundary");
  const auto& T = cfg.time;
  FrontParams params{cfg.left.mu, cfg.right.mu, cfg.front_min_gap};
  const double g0 = cfg.domain.xi1(T.t0), h0 = cfg.domain.xi2(T.t0);
  const std::size_t n = static_cast<std::size_t>(cfg.nodes);
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = cfg.initial(g0 + (h0 - g0) * double(j) / double(n - 1), T.t0);
  w.front() = w.back() = 0.0;

  FreeBoundaryRun run;
  run.meta = {"crank-nicolson", T.dt, cfg.nodes, T.output_every};
  FreeBoundaryState s = make_state(on_interval(T.t0, g0, h0, std::move(w)), params);
  auto trace = [&](const FreeBoundaryState& st) {
    const auto v = st.profile.values();
    const double dx = st.profile.spacing();
    run.left.push(st.time(), v.front(), v[1], one_sided_slope(v, dx, 1), st.profile.scale(), st.g);
    run.right.push(st.time(), v.back(), v[n - 2], one_sided_slope(v, dx, 2), st.profile.scale(), st.h);
  };
  trace(s);
  run.states.push_back(s);

  const long steps = std::max(1L, std::lround(T.horizon / T.dt));
  for (long k = 0; k < steps; ++k) {
    if (k < cfg.rannacher_steps) {
      s = step_free_boundary(s, cfg.coefficients, 0.5 * T.dt, params, 1.0);
      s = step_free_boundary(s, cfg.coefficients, 0.5 * T.dt, params, 1.0);
    } else {
      s = step_free_boundary(s, cfg.coefficients, T.dt, params, 0.5);
    }
    if (s.extinct) {
      run.extinct = true;
      run.extinction_time = s.time() + T.dt;
      run.states.push_back(s);
      break;
    }
    trace(s);
    if ((k + 1) % T.output_every == 0 || k + 1 == steps) run.states.push_back(s);
  }
  return run;
}

// ---------------------------------------------------------------------------

MaxLocationTrace track_max_location(const std::vector<Snapshot>& profiles, double plateau_tol) {
  MaxLocationTrace tr;
  for (const auto& p : profiles) {
    const auto u = p.values();
    const auto x = p.nodes();
    const auto it = std::max_element(u.begin(), u.end());
    const std::size_t j = static_cast<std::size_t>(it - u.begin());
    const double top = *it;
    const double tol = plateau_tol * p.scale();
    const auto near = std::count_if(u.begin(), u.end(), [&](double v) { return v >= top - tol; });
    double gamma = x[j];
    if (j > 0 && j + 1 < u.size()) {
      const double den = u[j - 1] - 2.0 * u[j] + u[j + 1];
      if (den < 0) gamma = x[j] + 0.5 * (x[j + 1] - x[j - 1]) * 0.5 * (u[j - 1] - u[j + 1]) / den;
    }
    tr.t.push_back(p.time());
    tr.gamma.push_back(gamma);
    tr.plateau.push_back(near >= 3);
  }
  return tr;
}

namespace {
std::vector<double> trailing(const MaxLocationTrace& tr, double fraction) {
  const std::size_t n = tr.gamma.size();
  const std::size_t first = n - std::min(n, static_cast<std::size_t>(std::ceil(fraction * double(n))));
  std::vector<double> out;
  for (std::size_t k = first; k < n; ++k)
    if (!tr.plateau[k]) out.push_back(tr.gamma[k]);
  return out;
}
}  // namespace

double MaxLocationTrace::drift(double fraction) const {
  const auto v = trailing(*this, fraction);
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double MaxLocationTrace::mean(double fraction) const {
  const auto v = trailing(*this, fraction);
  if (v.empty()) return 0.0;
  double s = 0;
  for (double g : v) s += g;
  return s / double(v.size());
}

}  // namespace zlab::stefan
