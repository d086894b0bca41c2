#include "zerolab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zerolab/error.hpp"
#include "zerolab/stefan.hpp"
#include "zerolab/transform.hpp"

namespace zlab::solver {

namespace detail {

std::vector<double> solve_tridiagonal(std::span<const double> lo, std::span<const double> di,
                                      std::span<const double> up, std::span<const double> rhs, double t) {
  const std::size_t n = di.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double off = (j > 0 ? std::abs(lo[j]) : 0.0) + (j + 1 < n ? std::abs(up[j]) : 0.0);
    if (std::abs(di[j]) < off * (1 - 1e-12))
      throw SolverError("tridiagonal system not diagonally dominant at row " + std::to_string(j), t);
  }
  std::vector<double> c(n), d(n), x(n);
  double piv = di[0];
  if (!(std::abs(piv) > 0) || !std::isfinite(piv)) throw SolverError("tridiagonal pivot vanished at row 0", t);
  c[0] = n > 1 ? up[0] / piv : 0.0;
  d[0] = rhs[0] / piv;
  for (std::size_t j = 1; j < n; ++j) {
    piv = di[j] - lo[j] * c[j - 1];
    if (!(std::abs(piv) > 0) || !std::isfinite(piv))
      throw SolverError("tridiagonal pivot vanished at row " + std::to_string(j), t);
    c[j] = j + 1 < n ? up[j] / piv : 0.0;
    d[j] = (rhs[j] - lo[j] * d[j - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) x[j] = d[j] - c[j] * x[j + 1];
  return x;
}

SideRow side_row(const BoundaryCondition& bc, double t, double length, bool origin_symmetry, int dimension) {
  SideRow r;
  r.t = t;
  switch (bc.kind) {
    case BoundaryKind::DirichletZero:
    case BoundaryKind::FreeStefan:
      r.kind = SideRow::Kind::Dirichlet;
      break;
    case BoundaryKind::DirichletValue:
      r.kind = SideRow::Kind::Dirichlet;
      r.value = bc.value(0.0, t);
      break;
    case BoundaryKind::Neumann:
      r.kind = origin_symmetry ? SideRow::Kind::Symmetry : SideRow::Kind::Robin;
      r.dimension = dimension;
      break;
    case BoundaryKind::Robin:
      r.kind = SideRow::Kind::Robin;
      r.beta = length * bc.beta(0.0, t);
      break;
    case BoundaryKind::NonlinearFlux:
      r.kind = SideRow::Kind::Flux;
      r.g = &bc.flux;
      r.scale = length;
      break;
  }
  return r;
}

namespace {

// Linear part of the spatial operator at one time level plus the nonlinear
// flux hooks at the end rows.
struct LevelOperator {
  std::vector<double> lo, di, up, k;
  bool dirichlet[2] = {false, false};
  double dirichlet_value[2] = {0, 0};
  // Flux rows: term = flux_coef * scale * g(t, w_end)
  const Field* g[2] = {nullptr, nullptr};
  double flux_coef[2] = {0, 0};
  double flux_scale[2] = {1, 1};
  double flux_t[2] = {0, 0};

  double flux_term(int side, double w) const { return flux_coef[side] * flux_scale[side] * (*g[side])(0.0, flux_t[side], w); }
  double flux_derivative(int side, double w) const {
    const double hstep = 1e-7 * std::max(1.0, std::abs(w));
    return flux_coef[side] * flux_scale[side] *
           ((*g[side])(0.0, flux_t[side], w + hstep) - (*g[side])(0.0, flux_t[side], w - hstep)) / (2 * hstep);
  }
};

LevelOperator assemble(double h, const LevelCoefficients& co, const SideRow& left, const SideRow& right) {
  const std::size_t n = co.a.size();
  LevelOperator op;
  op.lo.assign(n, 0.0);
  op.di.assign(n, 0.0);
  op.up.assign(n, 0.0);
  op.k.assign(n, 0.0);
  const double h2 = h * h;
  auto alpha = [&](std::size_t j) { return co.a[j] / h2 - co.b[j] / (2 * h); };
  auto delta = [&](std::size_t j) { return -2.0 * co.a[j] / h2 + co.c[j]; };
  auto gamma = [&](std::size_t j) { return co.a[j] / h2 + co.b[j] / (2 * h); };
  for (std::size_t j = 1; j + 1 < n; ++j) {
    op.lo[j] = alpha(j);
    op.di[j] = delta(j);
    op.up[j] = gamma(j);
  }
  using K = SideRow::Kind;
  // Left: ghost w_{-1} = w_1 - 2h (beta w_0 + sigma).
  switch (left.kind) {
    case K::Dirichlet:
      op.dirichlet[0] = true;
      op.dirichlet_value[0] = left.value;
      break;
    case K::Robin:
      op.di[0] = delta(0) - 2 * h * alpha(0) * left.beta;
      op.up[0] = alpha(0) + gamma(0);
      op.k[0] = -2 * h * alpha(0) * left.sigma;
      break;
    case K::Flux:
      op.di[0] = delta(0);
      op.up[0] = alpha(0) + gamma(0);
      op.g[0] = left.g;
      op.flux_coef[0] = -2 * h * alpha(0);
      op.flux_scale[0] = left.scale;
      op.flux_t[0] = left.t;
      break;
    case K::Symmetry: {
      const double N = left.dimension;
      op.di[0] = -2.0 * N * co.a[0] / h2 + co.c[0];
      op.up[0] = 2.0 * N * co.a[0] / h2;
      break;
    }
  }
  // Right: ghost w_M = w_{M-2} + 2h (-beta w + sigma).
  const std::size_t m = n - 1;
  switch (right.kind) {
    case K::Dirichlet:
      op.dirichlet[1] = true;
      op.dirichlet_value[1] = right.value;
      break;
    case K::Robin:
      op.lo[m] = alpha(m) + gamma(m);
      op.di[m] = delta(m) - 2 * h * gamma(m) * right.beta;
      op.k[m] = 2 * h * gamma(m) * right.sigma;
      break;
    case K::Flux:
      op.lo[m] = alpha(m) + gamma(m);
      op.di[m] = delta(m);
      op.g[1] = right.g;
      op.flux_coef[1] = 2 * h * gamma(m);
      op.flux_scale[1] = right.scale;
      op.flux_t[1] = right.t;
      break;
    case K::Symmetry:
      throw SolverError("symmetry condition is only available at the left end", right.t);
  }
  return op;
}

// (L w)_j including the nonlinear flux terms.
std::vector<double> apply(const LevelOperator& op, std::span<const double> w) {
  const std::size_t n = w.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double v = op.di[j] * w[j] + op.k[j];
    if (j > 0) v += op.lo[j] * w[j - 1];
    if (j + 1 < n) v += op.up[j] * w[j + 1];
    out[j] = v;
  }
  if (op.g[0]) out[0] += op.flux_term(0, w[0]);
  if (op.g[1]) out[n - 1] += op.flux_term(1, w[n - 1]);
  return out;
}

}  // namespace

std::vector<double> theta_step(std::span<const double> w, double h, const LevelCoefficients& co,
                               const SideRow& left_old, const SideRow& right_old, const SideRow& left_new,
                               const SideRow& right_new, std::span<const double> source, double dt,
                               const StepOptions& opts, StepInfo* info) {
  const std::size_t n = w.size();
  const double th = opts.theta;
  const LevelOperator old_op = assemble(h, co, left_old, right_old);
  const LevelOperator new_op = assemble(h, co, left_new, right_new);
  const double t_new = left_new.t;

  // Right-hand side.
  std::vector<double> rhs(w.begin(), w.end());
  if (th < 1.0) {
    const auto Lw = apply(old_op, w);
    for (std::size_t j = 0; j < n; ++j) rhs[j] += (1.0 - th) * dt * Lw[j];
  }
  for (std::size_t j = 0; j < n; ++j) rhs[j] += th * dt * new_op.k[j];
  if (!source.empty())
    for (std::size_t j = 0; j < n; ++j) rhs[j] += dt * source[j];

  // Matrix I - th dt L_new (linear part).
  std::vector<double> lo(n), di(n), up(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = -th * dt * new_op.lo[j];
    di[j] = 1.0 - th * dt * new_op.di[j];
    up[j] = -th * dt * new_op.up[j];
  }
  for (int s = 0; s < 2; ++s) {
    if (!new_op.dirichlet[s]) continue;
    const std::size_t j = s == 0 ? 0 : n - 1;
    lo[j] = up[j] = 0.0;
    di[j] = 1.0;
    rhs[j] = new_op.dirichlet_value[s];
  }

  auto residual = [&](std::span<const double> x) {
    std::vector<double> r(n);
    for (std::size_t j = 0; j < n; ++j) {
      double v = di[j] * x[j] - rhs[j];
      if (j > 0) v += lo[j] * x[j - 1];
      if (j + 1 < n) v += up[j] * x[j + 1];
      r[j] = v;
    }
    if (new_op.g[0]) r[0] -= th * dt * new_op.flux_term(0, x[0]);
    if (new_op.g[1]) r[n - 1] -= th * dt * new_op.flux_term(1, x[n - 1]);
    return r;
  };
  auto norm = [](const std::vector<double>& r) {
    double m = 0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  };

  std::vector<double> x;
  int iterations = 0;
  double res_norm = 0.0;
  if (!new_op.g[0] && !new_op.g[1]) {
    x = solve_tridiagonal(lo, di, up, rhs, t_new);
  } else {
    // Damped Newton; only the end-row diagonals depend on x.
    x.assign(w.begin(), w.end());
    auto r = residual(x);
    res_norm = norm(r);
    double rhs_scale = 1.0;
    for (double v : rhs) rhs_scale = std::max(rhs_scale, std::abs(v));
    while (res_norm > opts.newton_tol * rhs_scale) {
      if (iterations >= opts.newton_max_iter)
        throw SolverError("Newton iteration at the flux boundary did not converge, residual " + std::to_string(res_norm),
                          t_new);
      ++iterations;
      auto jd = di;
      if (new_op.g[0]) jd[0] -= th * dt * new_op.flux_derivative(0, x[0]);
      if (new_op.g[1]) jd[n - 1] -= th * dt * new_op.flux_derivative(1, x[n - 1]);
      std::vector<double> neg(n);
      for (std::size_t j = 0; j < n; ++j) neg[j] = -r[j];
      const auto dx = solve_tridiagonal(lo, jd, up, neg, t_new);
      double step = 1.0;
      for (int k = 0; k < 30; ++k, step *= 0.5) {
        std::vector<double> trial(n);
        for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] + step * dx[j];
        auto rt = residual(trial);
        const double nt = norm(rt);
        if (nt < res_norm || k == 29) {
          x = std::move(trial);
          r = std::move(rt);
          res_norm = nt;
          break;
        }
      }
    }
  }
  if (info) {
    info->newton_iterations = iterations;
    info->newton_residual = res_norm;
    const auto r = residual(x);
    double sc = 1.0;
    for (double v : x) sc = std::max(sc, std::abs(v));
    info->boundary_residual_left = std::abs(r[0]) / sc;
    info->boundary_residual_right = std::abs(r[n - 1]) / sc;
  }
  return x;
}

}  // namespace detail

using detail::LevelCoefficients;
using detail::side_row;
using detail::SideRow;
using detail::theta_step;

Snapshot advance(const Snapshot& state, const CoefficientField& field, const BoundaryCondition& left,
                 const BoundaryCondition& right, double dt, const StepOptions& opts, StepInfo* info) {
  if (!(dt > 0)) throw SolverError("time step must be positive", state.time());
  const auto x = state.nodes();
  const std::size_t n = x.size();
  const double L = x.back() - x.front();
  const double h = 1.0 / double(n - 1);
  const double t = state.time(), tm = t + 0.5 * dt, t1 = t + dt;
  const int N = field.radial_dimension();
  const bool sym = field.origin_symmetry;

  LevelCoefficients co;
  co.a.resize(n);
  co.b.resize(n);
  co.c.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    co.a[j] = field.a(x[j], tm) / (L * L);
    co.b[j] = (sym && j == 0) ? 0.0 : field.b(x[j], tm) / L;
    co.c[j] = field.c(x[j], tm);
  }
  const SideRow lo = side_row(left, t, L, sym, N), ro = side_row(right, t, L, false, N);
  const SideRow ln = side_row(left, t1, L, sym, N), rn = side_row(right, t1, L, false, N);
  const auto w = state.values();
  std::vector<double> out;
  if (field.f) {
    std::vector<double> src(n);
    for (std::size_t j = 0; j < n; ++j) src[j] = (*field.f)(x[j], tm, w[j]);
    const auto pred = theta_step(w, h, co, lo, ro, ln, rn, src, dt, opts, nullptr);
    for (std::size_t j = 0; j < n; ++j) src[j] = (*field.f)(x[j], tm, 0.5 * (w[j] + pred[j]));
    out = theta_step(w, h, co, lo, ro, ln, rn, src, dt, opts, info);
  } else {
    out = theta_step(w, h, co, lo, ro, ln, rn, {}, dt, opts, info);
  }
  return Snapshot(t1, std::vector<double>(x.begin(), x.end()), std::move(out));
}

std::pair<double, double> boundary_residuals(const Snapshot& snap, const BoundaryCondition& left,
                                             const BoundaryCondition& right) {
  const auto u = snap.values();
  const double dx = snap.spacing();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto side = [&](const BoundaryCondition& bc, int i) {
    const double ux = one_sided_slope(u, dx, i);
    const double w = i == 1 ? u.front() : u.back();
    const double sign = i == 1 ? -1.0 : 1.0;
    switch (bc.kind) {
      case BoundaryKind::Neumann: return std::abs(ux);
      case BoundaryKind::Robin: return std::abs(ux + sign * bc.beta(0, snap.time()) * w);
      case BoundaryKind::NonlinearFlux: return std::abs(ux - bc.flux(0, snap.time(), w));
      default: return nan;
    }
  };
  return {side(left, 1), side(right, 2)};
}

// ---------------------------------------------------------------------------

namespace {

class Runner {
 public:
  explicit Runner(const ScenarioConfig& cfg) : cfg_(cfg), field_(cfg.coefficients) {
    if (field_.radial_dimension() > 0)
      field_ = transform::regularize_radial(field_, 0.0, cfg.domain, cfg.initial, cfg.time.t0, cfg.tol.degenerate);
    n_ = static_cast<std::size_t>(cfg.nodes);
    h_ = 1.0 / double(n_ - 1);
    y_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) y_[j] = double(j) * h_;
    y_.back() = 1.0;
  }

  Trajectory run() {
    const auto& T = cfg_.time;
    traj_.meta = {"crank-nicolson", T.dt, cfg_.nodes, T.output_every};
    const auto f0 = frame(T.t0);
    std::vector<double> w(n_);
    for (std::size_t j = 0; j < n_; ++j) w[j] = cfg_.initial(f0.xi1 + f0.length() * y_[j], T.t0);
    const SideRow l0 = row(cfg_.left, T.t0, f0.length(), true), r0 = row(cfg_.right, T.t0, f0.length(), false);
    if (l0.kind == SideRow::Kind::Dirichlet) w.front() = l0.value;
    if (r0.kind == SideRow::Kind::Dirichlet) w.back() = r0.value;
    record(T.t0, w, f0, true);

    const long steps = std::max(1L, std::lround(T.horizon / T.dt));
    for (long n = 0; n < steps; ++n) {
      const double ta = T.t0 + double(n) * T.dt;
      const double tb = T.t0 + double(n + 1) * T.dt;
      try {
        if (n < cfg_.rannacher_steps) {
          const double tm = 0.5 * (ta + tb);
          w = substep(w, ta, tm, 1.0);
          w = substep(w, tm, tb, 1.0);
        } else {
          w = substep(w, ta, tb, 0.5);
        }
      } catch (const SolverError&) {
        throw;
      } catch (const Error& e) {
        throw SolverError(std::string("step failed: ") + e.what(), tb);
      }
      const bool out = (n + 1) % T.output_every == 0 || n + 1 == steps;
      record(tb, w, frame(tb), out);
    }
    return std::move(traj_);
  }

 private:
  transform::DomainFrame frame(double t) const {
    return transform::frame_at(cfg_.domain, t, cfg_.time.t0, cfg_.time.end());
  }

  SideRow row(const BoundaryCondition& bc, double t, double L, bool is_left) const {
    return side_row(bc, t, L, is_left && field_.origin_symmetry, field_.radial_dimension());
  }

  std::vector<double> substep(const std::vector<double>& w, double ta, double tb, double theta) {
    const double tm = 0.5 * (ta + tb), dt = tb - ta;
    const auto fm = frame(tm);
    LevelCoefficients co;
    co.a.resize(n_);
    co.b.resize(n_);
    co.c.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      if (field_.origin_symmetry && j == 0) {
        const double L = fm.length();
        co.a[0] = field_.a(fm.xi1, tm) / (L * L);
        co.b[0] = 0.0;
        co.c[0] = field_.c(fm.xi1, tm);
        continue;
      }
      const auto k = transform::immobilized_coefficients(field_, fm, y_[j]);
      co.a[j] = k.a;
      co.b[j] = k.b;
      co.c[j] = k.c;
    }
    const auto fa = frame(ta), fb = frame(tb);
    const SideRow lo = row(cfg_.left, ta, fa.length(), true), ro = row(cfg_.right, ta, fa.length(), false);
    const SideRow ln = row(cfg_.left, tb, fb.length(), true), rn = row(cfg_.right, tb, fb.length(), false);
    solver::StepOptions opts;
    opts.theta = theta;
    if (!field_.f) return theta_step(w, h_, co, lo, ro, ln, rn, {}, dt, opts, nullptr);
    std::vector<double> src(n_);
    for (std::size_t j = 0; j < n_; ++j) src[j] = (*field_.f)(fm.xi1 + fm.length() * y_[j], tm, w[j]);
    const auto pred = theta_step(w, h_, co, lo, ro, ln, rn, src, dt, opts, nullptr);
    for (std::size_t j = 0; j < n_; ++j)
      src[j] = (*field_.f)(fm.xi1 + fm.length() * y_[j], tm, 0.5 * (w[j] + pred[j]));
    return theta_step(w, h_, co, lo, ro, ln, rn, src, dt, opts, nullptr);
  }

  void record(double t, const std::vector<double>& w, const transform::DomainFrame& f, bool snapshot) {
    double scale = 0;
    for (double v : w) scale = std::max(scale, std::abs(v));
    const double L = f.length();
    const double dx = L * h_;
    traj_.left.push(t, w.front(), w[1], one_sided_slope(w, dx, 1), scale, f.xi1);
    traj_.right.push(t, w.back(), w[n_ - 2], one_sided_slope(w, dx, 2), scale, f.xi2);
    if (!snapshot) return;
    if (cfg_.half_line) {
      double tail = 0;
      for (std::size_t j = 0; j < n_; ++j)
        if (y_[j] >= 0.9) tail = std::max(tail, std::abs(w[j]));
      if (tail > cfg_.support_tol * scale)
        throw SolverError("solution support reached the truncation zone (last 10% of the half-line window)", t);
    }
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = f.xi1 + L * y_[j];
    x.back() = f.xi2;
    traj_.snapshots.emplace_back(t, std::move(x), w);
  }

  const ScenarioConfig& cfg_;
  CoefficientField field_;
  std::size_t n_;
  double h_;
  std::vector<double> y_;
  Trajectory traj_;
};

}  // namespace

Trajectory solve_trajectory(const ScenarioConfig& cfg) {
  if (cfg.is_free_boundary()) return stefan::solve_free_boundary(cfg).to_trajectory();
  return Runner(cfg).run();
}

}  // namespace zlab::solver
