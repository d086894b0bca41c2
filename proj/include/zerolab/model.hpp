#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zerolab/field.hpp"

namespace zlab {

/// Declared L-infinity bounds. Bounds are claims made by the scenario
/// author; `sample_bound_warnings` reports samples that contradict them.
struct RegularityBounds {
  std::optional<double> a_min, a_max, b_abs, c_abs, a_t_abs, a_x_abs;
  friend bool operator==(const RegularityBounds&, const RegularityBounds&) = default;
};

/// Coefficients of u_t = a u_xx + b u_x + c u (+ f(x,t,u)).
struct CoefficientField {
  Field a = Field::constant(1.0);
  Field b = Field::constant(0.0);
  Field c = Field::constant(0.0);
  std::optional<Field> f;
  RegularityBounds bounds;
  /// Which smoothness set the scenario claims: "strong" for
  /// a, 1/a, a_t, a_x, a_xx, b, b_t, b_x, c bounded; "weak" drops
  /// a_xx, b_t, b_x. Recorded only.
  std::string smoothness = "strong";
  /// Set by transform::regularize_radial: the left endpoint is the origin
  /// of an N-ball and row 0 uses the symmetric limit N a u_rr + c u.
  bool origin_symmetry = false;

  /// N when b is the radial drift (N-1)/r, 0 otherwise.
  int radial_dimension() const { return b.radial_dimension(); }

  friend bool operator==(const CoefficientField&, const CoefficientField&) = default;
};

/// Interval I(t) = [left(t), right(t)].
struct MovingDomain {
  Field left = Field::constant(0.0);
  Field right = Field::constant(1.0);
  /// Closed sub-intervals of time on which both endpoints are declared C^1.
  /// Empty means "the whole horizon" unless `c1_declared` is true.
  std::vector<std::pair<double, double>> c1_intervals;
  bool c1_declared = false;
  /// Declared Lipschitz constant for the sampled continuity check.
  std::optional<double> lipschitz;

  bool is_fixed() const { return left.is_time_independent() && right.is_time_independent(); }
  double xi1(double t) const { return left(0.0, t); }
  double xi2(double t) const { return right(0.0, t); }

  friend bool operator==(const MovingDomain&, const MovingDomain&) = default;
};

enum class BoundaryKind { DirichletZero, DirichletValue, Neumann, Robin, NonlinearFlux, FreeStefan };

std::string to_string(BoundaryKind kind);

/// Boundary condition on one side. Side i = 1 is the left endpoint, i = 2
/// the right. Robin reads u_x + (-1)^i beta(t) u = 0; nonlinear flux reads
/// u_x = g(t, u); the Stefan front moves with speed -mu u_x.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::DirichletZero;
  Field value;  // DirichletValue: function of t
  Field beta;   // Robin: function of t, >= 0
  Field flux;   // NonlinearFlux: g(t, u) with the expression variables t and u
  bool h4 = false;
  double mu = 1.0;  // FreeStefan

  static BoundaryCondition dirichlet_zero() { return {}; }
  static BoundaryCondition dirichlet(Field v) {
    BoundaryCondition bc;
    bc.kind = BoundaryKind::DirichletValue;
    bc.value = std::move(v);
    return bc;
  }
  static BoundaryCondition neumann() {
    BoundaryCondition bc;
    bc.kind = BoundaryKind::Neumann;
    return bc;
  }
  static BoundaryCondition robin(Field beta) {
    BoundaryCondition bc;
    bc.kind = BoundaryKind::Robin;
    bc.beta = std::move(beta);
    return bc;
  }
  static BoundaryCondition nonlinear_flux(Field g, bool h4 = false) {
    BoundaryCondition bc;
    bc.kind = BoundaryKind::NonlinearFlux;
    bc.flux = std::move(g);
    bc.h4 = h4;
    return bc;
  }
  static BoundaryCondition stefan(double mu = 1.0) {
    BoundaryCondition bc;
    bc.kind = BoundaryKind::FreeStefan;
    bc.mu = mu;
    return bc;
  }

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

struct TimeGrid {
  double t0 = 0.0;
  double horizon = 1.0;  // length of the run; the run covers [t0, t0 + horizon]
  double dt = 1e-3;
  int output_every = 1;  // internal steps per stored snapshot
  std::optional<double> period;

  double end() const { return t0 + horizon; }
  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct Tolerances {
  double zero = 1e-8;        // tau_z, relative to max|u|
  double degenerate = 1e-4;  // tau_d, relative
  int burn_in = 5;           // internal steps ignored by monotonicity checks
  int drop_window = 10;      // output steps for drop attribution
  int moment_window = 5;     // W, samples
  int alternations = 2;      // k_x
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct OutputOptions {
  bool plots = false;
  bool export_trajectory = false;
  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

/// Fully validated scenario. Construct through `build_scenario` or call
/// `validate` after filling the fields by hand.
struct ScenarioConfig {
  std::string id = "scenario";
  CoefficientField coefficients;
  MovingDomain domain;
  BoundaryCondition left, right;
  Field initial;
  TimeGrid time;
  int nodes = 101;
  Tolerances tol;
  OutputOptions output;
  /// Half-line problems: the right endpoint is a truncation point with a
  /// far-field zero Dirichlet condition.
  bool half_line = false;
  double support_tol = 1e-6;
  /// Length of the window [xi1, xi1 + analysis_length] used by checks
  /// that look at a bounded part of a half-line solution.
  std::optional<double> analysis_length;
  int rannacher_steps = 2;
  double front_min_gap = 1e-6;  // Stefan extinction threshold

  bool is_free_boundary() const {
    return left.kind == BoundaryKind::FreeStefan || right.kind == BoundaryKind::FreeStefan;
  }
  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Solution values on an ordered grid at one time, with finite-difference
/// derivative estimates (centred inside, second-order one-sided at the ends).
class Snapshot {
 public:
  Snapshot(double t, std::vector<double> nodes, std::vector<double> values);

  double time() const noexcept { return t_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> derivative() const noexcept { return ux_; }
  std::size_t size() const noexcept { return values_.size(); }
  double left() const noexcept { return nodes_.front(); }
  double right() const noexcept { return nodes_.back(); }
  /// max |u| over the nodes.
  double scale() const noexcept { return scale_; }
  /// Mean node spacing.
  double spacing() const noexcept { return (nodes_.back() - nodes_.front()) / double(nodes_.size() - 1); }

  /// Re-derives the derivative estimates and checks them bit-for-bit.
  bool derivatives_consistent() const;

 private:
  double t_;
  std::vector<double> nodes_, values_, ux_;
  double scale_ = 0.0;
};

/// Finite-difference derivative estimates used by Snapshot.
std::vector<double> derivative_estimates(std::span<const double> nodes, std::span<const double> values);

/// Second-order one-sided derivative at the left (side 1) or right (side 2)
/// end of a uniform grid.
double one_sided_slope(std::span<const double> values, double dx, int side);

/// Messages for sampled values contradicting the declared bounds.
std::vector<std::string> sample_bound_warnings(const ScenarioConfig& cfg, int samples = 41);

/// Build a scenario from JSON text. Throws ParseError for malformed input and
/// ConfigError for invariant violations.
ScenarioConfig build_scenario(const std::string& source);
ScenarioConfig build_scenario(const json& source);
json to_json(const ScenarioConfig& cfg);

/// Stable 64-bit FNV-1a hash of the canonical serialization.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace zlab
