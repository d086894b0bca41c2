#include "zerolab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "zerolab/error.hpp"

namespace zlab::transform {

namespace {

constexpr double kDiffStep = 1e-5;

std::string interval_text(double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.6g, %.6g]", a, b);
  return buf;
}

std::vector<std::pair<double, double>> c1_cover(const MovingDomain& d, double t_begin, double t_end) {
  if (!d.c1_declared) return {{t_begin, t_end}};
  auto iv = d.c1_intervals;
  std::sort(iv.begin(), iv.end());
  return iv;
}

// Uncovered part of [a, b] by the sorted intervals, or nullopt.
std::optional<std::pair<double, double>> first_gap(const std::vector<std::pair<double, double>>& iv, double a, double b) {
  const double eps = 1e-12 * (1 + std::abs(a) + std::abs(b));
  double cur = a;
  for (const auto& [p, q] : iv) {
    if (q < cur - eps) continue;
    if (p > cur + eps) return std::make_pair(cur, std::min(p, b));
    cur = std::max(cur, q);
    if (cur >= b - eps) return std::nullopt;
  }
  if (cur < b - eps) return std::make_pair(cur, b);
  return std::nullopt;
}

}  // namespace

double endpoint_derivative(const Field& xi, const MovingDomain& domain, double t, double t_begin, double t_end) {
  if (xi.is_time_independent()) return 0.0;
  const auto cover = c1_cover(domain, t_begin, t_end);
  const double eps = 1e-12 * (1 + std::abs(t));
  for (const auto& [p, q] : cover) {
    if (t < p - eps || t > q + eps) continue;
    auto f = [&](double s) { return xi(0.0, s); };
    const double h = std::min(kDiffStep, (q - p) / 4.0);
    if (!(h > 0)) break;
    if (t - h >= p - eps && t + h <= q + eps) return (f(t + h) - f(t - h)) / (2 * h);
    if (t - h < p - eps) return (-3 * f(t) + 4 * f(t + h) - f(t + 2 * h)) / (2 * h);
    return (3 * f(t) - 4 * f(t - h) + f(t - 2 * h)) / (2 * h);
  }
  // Report the uncovered stretch around t.
  double lo = t_begin, hi = t_end;
  for (const auto& [p, q] : cover) {
    if (q < t) lo = std::max(lo, q);
    if (p > t) hi = std::min(hi, p);
  }
  throw TransformError("endpoint derivative unavailable: no C1 annotation on " + interval_text(lo, hi));
}

DomainFrame frame_at(const MovingDomain& domain, double t, double t_begin, double t_end) {
  DomainFrame f;
  f.t = t;
  f.xi1 = domain.xi1(t);
  f.xi2 = domain.xi2(t);
  f.dxi1 = endpoint_derivative(domain.left, domain, t, t_begin, t_end);
  f.dxi2 = endpoint_derivative(domain.right, domain, t, t_begin, t_end);
  return f;
}

Coefficients immobilized_coefficients(const CoefficientField& field, const DomainFrame& fr, double y) {
  const double L = fr.length();
  const double x = fr.xi1 + L * y;
  const double a = field.a(x, fr.t);
  const double b = field.b(x, fr.t);
  const double c = field.c(x, fr.t);
  return {a / (L * L), (b + fr.dxi1 * (1.0 - y) + fr.dxi2 * y) / L, c};
}

namespace {

TransformedProblem make_problem(std::shared_ptr<const CoefficientField> field, std::shared_ptr<const MovingDomain> dom,
                                double t_begin, double t_end) {
  TransformedProblem p;
  auto frame = [=](double t) { return frame_at(*dom, t, t_begin, t_end); };
  p.a = [=](double y, double t) { return immobilized_coefficients(*field, frame(t), y).a; };
  p.b = [=](double y, double t) { return immobilized_coefficients(*field, frame(t), y).b; };
  p.c = [=](double y, double t) { return immobilized_coefficients(*field, frame(t), y).c; };
  p.forward = [=](double y, double t) {
    const double x1 = dom->xi1(t);
    return x1 + (dom->xi2(t) - x1) * y;
  };
  p.inverse = [=](double x, double t) {
    const double x1 = dom->xi1(t);
    return (x - x1) / (dom->xi2(t) - x1);
  };
  p.jacobian = [=](double, double t) { return dom->xi2(t) - dom->xi1(t); };
  return p;
}

void require_cover(const MovingDomain& d, const Field& xi, double t_begin, double t_end) {
  if (xi.is_time_independent() || !d.c1_declared) return;
  auto iv = d.c1_intervals;
  std::sort(iv.begin(), iv.end());
  if (auto gap = first_gap(iv, t_begin, t_end))
    throw TransformError("cannot straighten: endpoint not declared C1 on " + interval_text(gap->first, gap->second));
}

}  // namespace

TransformedProblem straighten_domain(const CoefficientField& field, const MovingDomain& domain, double split,
                                     double t_begin, double t_end) {
  require_cover(domain, domain.left, t_begin, t_end);
  for (int k = 0; k <= 200; ++k) {
    const double t = t_begin + (t_end - t_begin) * k / 200.0;
    if (!(split > domain.xi1(t)))
      throw TransformError("split point X must exceed xi1(t) on the window (fails at t=" + std::to_string(t) + ")");
  }
  auto dom = std::make_shared<MovingDomain>(domain);
  dom->right = Field::constant(split);
  auto p = make_problem(std::make_shared<const CoefficientField>(field), dom, t_begin, t_end);
  p.split = split;
  return p;
}

TransformedProblem immobilize(const CoefficientField& field, const MovingDomain& domain, double t_begin, double t_end) {
  require_cover(domain, domain.left, t_begin, t_end);
  require_cover(domain, domain.right, t_begin, t_end);
  auto p = make_problem(std::make_shared<const CoefficientField>(field), std::make_shared<const MovingDomain>(domain),
                        t_begin, t_end);
  p.split = std::numeric_limits<double>::quiet_NaN();
  return p;
}

// ---------------------------------------------------------------------------
// Diffusion normalization

namespace {

struct QuadratureTable {
  std::vector<double> x, cum;  // cumulative integral of a^{-1/2}
};

class Normalizer {
 public:
  Normalizer(CoefficientField field, double x1, double x2, double t0, double horizon, int n)
      : field_(std::move(field)), x1_(x1), x2_(x2), t0_(t0), horizon_(horizon), n_(n) {}

  QuadratureTable table(double t) const {
    QuadratureTable q;
    q.x.resize(n_);
    q.cum.resize(n_);
    const double h = (x2_ - x1_) / double(n_ - 1);
    double prev = 0;
    for (int i = 0; i < n_; ++i) {
      q.x[i] = x1_ + h * i;
      const double a = field_.a(q.x[i], t);
      if (!(a > 0) || (field_.bounds.a_min && a < *field_.bounds.a_min))
        throw TransformError("quadrature failure: a(x,t) below a_min at x=" + std::to_string(q.x[i]) +
                             ", t=" + std::to_string(t));
      const double g = 1.0 / std::sqrt(a);
      q.cum[i] = i == 0 ? 0.0 : q.cum[i - 1] + 0.5 * h * (prev + g);
      prev = g;
    }
    return q;
  }

  double alpha(double t) const { return table(t).cum.back(); }

  // Piecewise-linear integrand within each cell, integrated exactly.
  double y(double x, double t) const {
    const auto q = table(t);
    const double h = (x2_ - x1_) / double(n_ - 1);
    const double pos = std::clamp((x - x1_) / h, 0.0, double(n_ - 1));
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), n_ - 2);
    const double g0 = 1.0 / std::sqrt(field_.a(q.x[i], t));
    const double g1 = 1.0 / std::sqrt(field_.a(q.x[i + 1], t));
    const double d = (pos - double(i)) * h;
    const double partial = g0 * d + 0.5 * (g1 - g0) / h * d * d;
    return (q.cum[i] + partial) / q.cum.back();
  }

  double x_of_y(double yv, double t) const {
    double lo = x1_, hi = x2_;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (y(mid, t) < yv ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double s(double t) const {
    if (t == t0_) return 0.0;
    const int m = n_;
    const double h = (t - t0_) / double(m - 1);
    double acc = 0, prev = 0;
    for (int k = 0; k < m; ++k) {
      const double al = alpha(t0_ + h * k);
      const double v = 1.0 / (al * al);
      if (k > 0) acc += 0.5 * h * (prev + v);
      prev = v;
    }
    return acc;
  }

  double t_of_s(double sv) const {
    double lo = t0_, hi = t0_ + horizon_;
    while (s(hi) < sv) hi += horizon_;
    for (int it = 0; it < 100 && hi - lo > 1e-14 * (1 + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (s(mid) < sv ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double x1() const { return x1_; }
  double x2() const { return x2_; }
  double t0() const { return t0_; }
  double horizon() const { return horizon_; }
  const CoefficientField& field() const { return field_; }

 private:
  CoefficientField field_;
  double x1_, x2_, t0_, horizon_;
  int n_;
};

}  // namespace

Normalized normalize_diffusion(const CoefficientField& field, double x1, double x2, double t0, double horizon,
                               int quad_nodes) {
  if (quad_nodes < 3) throw TransformError("normalization needs at least 3 quadrature nodes");
  if (!(x2 > x1)) throw TransformError("normalization needs x1 < x2");
  auto N = std::make_shared<const Normalizer>(field, x1, x2, t0, horizon, quad_nodes);
  // Fail early if a dips below a_min anywhere on a coarse time sample.
  for (int k = 0; k <= 10; ++k) (void)N->alpha(t0 + horizon * k / 10.0);

  Normalized out;
  out.map.alpha = [N](double t) { return N->alpha(t); };
  out.map.y = [N](double x, double t) { return N->y(x, t); };
  out.map.x_of_y = [N](double y, double t) { return N->x_of_y(y, t); };
  out.map.s = [N](double t) { return N->s(t); };
  out.map.t_of_s = [N](double s) { return N->t_of_s(s); };
  out.S = N->s(t0 + horizon);

  // Coefficients in (y, s). With X = x(y,t), sp = ds/dt = alpha^{-2}:
  //   a~ = a y_x^2 / sp,  b~ = (a y_xx + b y_x - y_t) / sp,  c~ = c / sp.
  // Derivatives of the quadrature map are taken by centred differences so
  // that a~ = 1 is a genuine check on the map, not an identity.
  struct Local {
    double x, t, yx, yxx, yt, sp;
  };
  auto local = [N](double y, double s) {
    Local L;
    L.t = N->t_of_s(s);
    L.x = N->x_of_y(y, L.t);
    const double hx = 1e-4 * (N->x2() - N->x1());
    const double xm = std::max(N->x1(), L.x - hx), xp = std::min(N->x2(), L.x + hx);
    const double ym = N->y(xm, L.t), y0 = N->y(L.x, L.t), yp = N->y(xp, L.t);
    L.yx = (yp - ym) / (xp - xm);
    const double hl = L.x - xm, hr = xp - L.x;
    L.yxx = (hl > 0 && hr > 0) ? 2.0 * (hl * yp - (hl + hr) * y0 + hr * ym) / (hl * hr * (hl + hr)) : 0.0;
    const double ht = 1e-5 * std::max(1.0, N->horizon());
    L.yt = (N->y(L.x, L.t + ht) - N->y(L.x, L.t - ht)) / (2 * ht);
    const double al = N->alpha(L.t);
    L.sp = 1.0 / (al * al);
    return L;
  };
  out.problem.a = [N, local](double y, double s) {
    const auto L = local(y, s);
    return N->field().a(L.x, L.t) * L.yx * L.yx / L.sp;
  };
  out.problem.b = [N, local](double y, double s) {
    const auto L = local(y, s);
    const auto& F = N->field();
    return (F.a(L.x, L.t) * L.yxx + F.b(L.x, L.t) * L.yx - L.yt) / L.sp;
  };
  out.problem.c = [N, local](double y, double s) {
    const auto L = local(y, s);
    return N->field().c(L.x, L.t) / L.sp;
  };
  out.problem.forward = [N](double y, double s) { return N->x_of_y(y, N->t_of_s(s)); };
  out.problem.inverse = [N](double x, double s) { return N->y(x, N->t_of_s(s)); };
  out.problem.jacobian = [N](double y, double s) {
    const double t = N->t_of_s(s);
    const double x = N->x_of_y(y, t);
    return std::sqrt(N->field().a(x, t)) * N->alpha(t);
  };
  out.problem.split = x2;
  return out;
}

// ---------------------------------------------------------------------------

CoefficientField regularize_radial(const CoefficientField& field, double r_min, const MovingDomain& domain,
                                   const Field& initial, double t0, double derivative_tol) {
  const int n = field.radial_dimension();
  if (n == 0) throw TransformError("field has no radial singularity marker");
  if (r_min < 0) throw TransformError("r_min must be non-negative");
  CoefficientField out = field;
  const double r1 = domain.xi1(t0), r2 = domain.xi2(t0);
  if (r1 == 0.0 && r_min == 0.0) {
    if (n > 1) {
      const double h = 1e-4 * (r2 - r1);
      const double slope = (-3 * initial(0, t0) + 4 * initial(h, t0) - initial(2 * h, t0)) / (2 * h);
      double scale = 0;
      for (int j = 0; j <= 100; ++j) scale = std::max(scale, std::abs(initial(r1 + (r2 - r1) * j / 100.0, t0)));
      if (std::abs(slope) > derivative_tol * std::max(scale, 1e-300) / (r2 - r1))
        throw TransformError("initial data has u_r(0) = " + std::to_string(slope) + " != 0 at the origin");
      out.origin_symmetry = true;
    }
    return out;
  }
  if (r1 < r_min) throw TransformError("domain reaches r < r_min");
  return out;
}

std::size_t choose_split_point(const Snapshot& snap, double window_fraction) {
  const auto u = snap.values();
  const std::size_t n = u.size();
  const std::size_t mid = (n - 1) / 2;
  const std::size_t half = std::max<std::size_t>(1, static_cast<std::size_t>(window_fraction * double(n)));
  const std::size_t lo = mid > half ? mid - half : 1;
  const std::size_t hi = std::min(n - 2, mid + half);
  std::size_t best = mid;
  for (std::size_t j = lo; j <= hi; ++j) {
    const double a = std::abs(u[j]), b = std::abs(u[best]);
    const auto dist = [&](std::size_t k) { return k > mid ? k - mid : mid - k; };
    if (a > b || (a == b && dist(j) < dist(best))) best = j;
  }
  return best;
}

}  // namespace zlab::transform
