#pragma once

#include <functional>

#include "zerolab/model.hpp"

namespace zlab::transform {

/// Endpoints and their time derivatives at one instant.
struct DomainFrame {
  double t = 0, xi1 = 0, xi2 = 1, dxi1 = 0, dxi2 = 0;
  double length() const { return xi2 - xi1; }
  double dlength() const { return dxi2 - dxi1; }
};

/// Endpoint derivative of a time function on the declared C^1 sub-intervals:
/// centred differences inside, second-order one-sided stencils near the
/// ends of the sub-interval. Time-independent endpoints return 0.
/// Throws TransformError when no declared sub-interval covers t.
double endpoint_derivative(const Field& xi, const MovingDomain& domain, double t, double t_begin, double t_end);

/// xi1, xi2 and derivatives at time t for a run spanning [t_begin, t_end].
DomainFrame frame_at(const MovingDomain& domain, double t, double t_begin, double t_end);

/// Coefficients of the problem written in y = (x - xi1) / (xi2 - xi1):
///   w_t = a~ w_yy + b~ w_y + c~ w,
///   a~ = a / L^2,  b~ = (b + xi1' (1 - y) + xi2' y) / L,  c~ = c,
/// with L = xi2 - xi1 and a, b, c evaluated at x = xi1 + L y.
struct Coefficients {
  double a, b, c;
};
Coefficients immobilized_coefficients(const CoefficientField& field, const DomainFrame& frame, double y);

struct TransformedProblem {
  std::function<double(double y, double t)> a, b, c;
  std::function<double(double y, double t)> forward;   // y -> x
  std::function<double(double x, double t)> inverse;   // x -> y
  std::function<double(double y, double t)> jacobian;  // dx/dy
  /// Right end of the straightened strip (X); NaN when both ends move.
  double split = 0.0;
};

/// Map [xi1(t), X] onto [0, 1] with y = (x - xi1(t)) / (X - xi1(t)).
/// Requires a C^1 annotation covering [t_begin, t_end] and X > xi1(t) on it.
TransformedProblem straighten_domain(const CoefficientField& field, const MovingDomain& domain, double split,
                                     double t_begin, double t_end);

/// Map [xi1(t), xi2(t)] onto [0, 1] (both sides moving).
TransformedProblem immobilize(const CoefficientField& field, const MovingDomain& domain, double t_begin, double t_end);

/// Change of variables that turns the diffusion coefficient into 1:
///   alpha(t) = int a(z,t)^{-1/2} dz over [x1, x2],
///   y(x,t)   = alpha(t)^{-1} int_{x1}^{x} a(z,t)^{-1/2} dz,
///   s(t)     = int_{t0}^{t} alpha^{-2}.
/// Composite trapezoid quadrature on `quad_nodes` points.
struct NormalizationMap {
  std::function<double(double t)> alpha;
  std::function<double(double x, double t)> y;
  std::function<double(double y, double t)> x_of_y;
  std::function<double(double t)> s;
  std::function<double(double s)> t_of_s;
};

struct Normalized {
  TransformedProblem problem;  // coefficients as functions of (y, s)
  NormalizationMap map;
  double S = 0.0;  // s(t0 + T)
};

Normalized normalize_diffusion(const CoefficientField& field, double x1, double x2, double t0, double horizon,
                               int quad_nodes = 401);

/// Handle the (N-1)/r drift. When the domain contains r = 0 (and r_min == 0)
/// the returned field carries `origin_symmetry`, which makes the solver use
/// u_t = N a u_rr + c u with u_r = 0 at the origin. Otherwise the field is
/// returned as is, provided the domain stays in r >= r_min.
CoefficientField regularize_radial(const CoefficientField& field, double r_min, const MovingDomain& domain,
                                   const Field& initial, double t0, double derivative_tol = 1e-4);

/// Split point for one-sided analysis: the node with maximal |u| inside a
/// window around the midpoint of I(t), ties broken towards the midpoint.
std::size_t choose_split_point(const Snapshot& snap, double window_fraction = 0.1);

}  // namespace zlab::transform
