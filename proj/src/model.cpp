#include "zerolab/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include "zerolab/error.hpp"

namespace zlab {

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::DirichletZero: return "dirichlet_zero";
    case BoundaryKind::DirichletValue: return "dirichlet";
    case BoundaryKind::Neumann: return "neumann";
    case BoundaryKind::Robin: return "robin";
    case BoundaryKind::NonlinearFlux: return "flux";
    case BoundaryKind::FreeStefan: return "stefan";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Snapshot

double one_sided_slope(std::span<const double> v, double dx, int side) {
  const std::size_t n = v.size();
  if (side == 1) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx);
  return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dx);
}

std::vector<double> derivative_estimates(std::span<const double> x, std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<double> d(n);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (u[j + 1] - u[j - 1]) / (x[j + 1] - x[j - 1]);
  d[0] = one_sided_slope(u, x[1] - x[0], 1);
  d[n - 1] = one_sided_slope(u, x[n - 1] - x[n - 2], 2);
  return d;
}

Snapshot::Snapshot(double t, std::vector<double> nodes, std::vector<double> values)
    : t_(t), nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() != values_.size()) throw ConfigError("snapshot: nodes and values differ in length");
  if (nodes_.size() < 3) throw ConfigError("snapshot needs at least 3 nodes");
  for (std::size_t j = 1; j < nodes_.size(); ++j)
    if (!(nodes_[j] > nodes_[j - 1])) throw ConfigError("snapshot nodes must be strictly increasing");
  ux_ = derivative_estimates(nodes_, values_);
  for (double v : values_) scale_ = std::max(scale_, std::abs(v));
}

bool Snapshot::derivatives_consistent() const { return derivative_estimates(nodes_, values_) == ux_; }

// ---------------------------------------------------------------------------
// Validation

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
  return v;
}

void check_finite_bound(const std::optional<double>& v, const char* name) {
  if (v && !std::isfinite(*v)) throw ConfigError(std::string("declared bound ") + name + " is not finite");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (nodes < 3) throw ConfigError("grid needs at least 3 nodes (M >= 3)");
  if (!(time.dt > 0)) throw ConfigError("time step must be positive");
  if (!(time.horizon > 0)) throw ConfigError("horizon must be positive");
  if (time.output_every < 1) throw ConfigError("output_every must be >= 1");
  if (time.period && !(*time.period > 0)) throw ConfigError("period must be positive");
  if (!(tol.zero > 0)) throw ConfigError("zero tolerance must be positive");
  if (!(tol.degenerate > 0)) throw ConfigError("degeneracy tolerance must be positive");
  if (tol.burn_in < 0) throw ConfigError("burn-in must be non-negative");
  if (tol.moment_window < 3) throw ConfigError("moment window must be >= 3 samples");
  if (tol.alternations < 2) throw ConfigError("alternation threshold must be >= 2");
  if (tol.drop_window < 1) throw ConfigError("drop window must be >= 1");
  if (rannacher_steps < 0) throw ConfigError("rannacher_steps must be >= 0");

  const auto& B = coefficients.bounds;
  check_finite_bound(B.a_min, "a_min");
  check_finite_bound(B.a_max, "a_max");
  check_finite_bound(B.b_abs, "b_abs");
  check_finite_bound(B.c_abs, "c_abs");
  check_finite_bound(B.a_t_abs, "a_t_abs");
  check_finite_bound(B.a_x_abs, "a_x_abs");
  if (B.a_min && !(*B.a_min > 0)) throw ConfigError("declared a_min must be positive");
  if (coefficients.smoothness != "strong" && coefficients.smoothness != "weak")
    throw ConfigError("smoothness claim must be 'strong' or 'weak'");

  const auto times = linspace(time.t0, time.end(), 201);

  // Domain: xi1 < xi2 and sampled continuity.
  for (double t : times) {
    if (!(domain.xi1(t) < domain.xi2(t))) throw ConfigError("domain endpoints cross: xi1(t) >= xi2(t) at t=" + std::to_string(t));
  }
  if (domain.lipschitz) {
    const double dt = times[1] - times[0];
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double j1 = std::abs(domain.xi1(times[k]) - domain.xi1(times[k - 1]));
      const double j2 = std::abs(domain.xi2(times[k]) - domain.xi2(times[k - 1]));
      if (std::max(j1, j2) > *domain.lipschitz * dt * (1 + 1e-9) + 1e-14)
        throw ConfigError("domain endpoint jumps faster than the declared Lipschitz constant");
    }
  }
  for (const auto& [p, q] : domain.c1_intervals)
    if (!(p <= q)) throw ConfigError("C1 interval must satisfy start <= end");

  const int radial_n = coefficients.radial_dimension();
  if (radial_n > 0 && domain.xi1(time.t0) < 0) throw ConfigError("radial problem needs r >= 0");

  // Diffusion positivity and grid Peclet number.
  const auto ys = linspace(0.0, 1.0, std::min(nodes, 201));
  const auto ptimes = linspace(time.t0, time.end(), 21);
  for (double t : ptimes) {
    const double x1 = domain.xi1(t), x2 = domain.xi2(t);
    const double dx = (x2 - x1) / double(nodes - 1);
    for (double y : ys) {
      const double x = x1 + (x2 - x1) * y;
      const double a = coefficients.a(x, t);
      if (!(a > 0) || !std::isfinite(a))
        throw ConfigError("diffusion coefficient a(x,t) must be positive; got " + std::to_string(a) + " at x=" +
                          std::to_string(x));
      if (B.a_min && a < *B.a_min * (1 - 1e-12))
        throw ConfigError("diffusion coefficient below declared a_min at x=" + std::to_string(x));
      if (radial_n > 0 && x <= 0.0) continue;
      const double b = coefficients.b(x, t);
      const double pe = std::abs(b) * dx / a;
      const double limit = radial_n > 0 ? 2.0 * (1 + 1e-12) : 2.0;
      if (!(pe < limit) && !(radial_n > 0 && pe <= limit))
        throw ConfigError("grid Peclet number |b| dx / a = " + std::to_string(pe) + " >= 2 at x=" +
                          std::to_string(x) + "; refine the grid");
    }
  }

  // Boundary conditions.
  auto check_side = [&](const BoundaryCondition& bc, int side) {
    const std::string name = side == 1 ? "left" : "right";
    switch (bc.kind) {
      case BoundaryKind::Robin:
        for (double t : times)
          if (bc.beta(0, t) < 0) throw ConfigError("Robin coefficient negative on the " + name + " boundary");
        break;
      case BoundaryKind::NonlinearFlux:
        if (bc.h4) {
          for (double t : linspace(time.t0, time.end(), 41))
            for (double u : linspace(0.0, 4.0, 41)) {
              const double h = 1e-6;
              const double gu = (bc.flux(0, t, u + h) - bc.flux(0, t, u)) / h;
              if (gu < -1e-8)
                throw ConfigError("flux law on the " + name + " boundary violates g_u >= 0 for u >= 0 (H4)");
            }
        }
        break;
      default:
        break;
    }
  };
  check_side(left, 1);
  check_side(right, 2);

  const bool stefan_l = left.kind == BoundaryKind::FreeStefan, stefan_r = right.kind == BoundaryKind::FreeStefan;
  if (stefan_l != stefan_r) throw ConfigError("free boundary conditions must be set on both sides");
  if (stefan_l) {
    if (!domain.is_fixed()) throw ConfigError("free-boundary runs take constant initial fronts g0 < h0");
    if (!(left.mu > 0) || !(right.mu > 0)) throw ConfigError("Stefan coefficient mu must be positive");
    if (coefficients.f)
      for (double t : linspace(time.t0, time.end(), 41))
        if (std::abs((*coefficients.f)(0, t, 0.0)) > 1e-14) throw ConfigError("reaction must satisfy f(t,0) = 0");
  }
  if (radial_n > 0 && domain.xi1(time.t0) == 0.0 && left.kind != BoundaryKind::Neumann)
    throw ConfigError("radial problem on a ball needs the symmetry (neumann) condition at r = 0");
  if (half_line && right.kind != BoundaryKind::DirichletZero)
    throw ConfigError("half-line truncation needs a zero Dirichlet far-field condition");

  // H4 reaction conditions when any side declares H4.
  if ((left.h4 || right.h4) && coefficients.f) {
    const auto& f = *coefficients.f;
    for (double t : linspace(time.t0, time.end(), 11))
      for (double y : linspace(0.0, 1.0, 11)) {
        const double x = domain.xi1(t) + y * (domain.xi2(t) - domain.xi1(t));
        if (f(x, t, 0.0) < -1e-14) throw ConfigError("reaction violates f(x,t,0) >= 0 (H4)");
        for (double u : {1.001, 1.5, 2.0, 4.0})
          if (!(f(x, t, u) < 0)) throw ConfigError("reaction violates f(x,t,u) < 0 for u > 1 (H4)");
      }
  }

  // Initial profile: not identically zero, non-negative for free boundaries.
  double umax = 0.0;
  const double x1 = domain.xi1(time.t0), x2 = domain.xi2(time.t0);
  for (int j = 0; j < nodes; ++j) {
    const double x = x1 + (x2 - x1) * double(j) / double(nodes - 1);
    const double v = initial(x, time.t0);
    if (!std::isfinite(v)) throw ConfigError("initial profile is not finite at x=" + std::to_string(x));
    umax = std::max(umax, std::abs(v));
    if (stefan_l && v < -1e-12) throw ConfigError("free-boundary initial data must be non-negative");
  }
  if (umax == 0.0) throw ConfigError("initial profile is identically zero");
}

std::vector<std::string> sample_bound_warnings(const ScenarioConfig& cfg, int samples) {
  std::vector<std::string> out;
  const auto& B = cfg.coefficients.bounds;
  const auto& C = cfg.coefficients;
  const auto ts = linspace(cfg.time.t0, cfg.time.end(), samples);
  const auto ys = linspace(0.0, 1.0, samples);
  double amax = 0, bmax = 0, cmax = 0, atmax = 0, axmax = 0, amin = std::numeric_limits<double>::infinity();
  for (double t : ts)
    for (double y : ys) {
      const double x = cfg.domain.xi1(t) + y * (cfg.domain.xi2(t) - cfg.domain.xi1(t));
      const double a = C.a(x, t);
      amin = std::min(amin, a);
      amax = std::max(amax, a);
      if (C.radial_dimension() == 0 || x > 0) bmax = std::max(bmax, std::abs(C.b(x, t)));
      cmax = std::max(cmax, std::abs(C.c(x, t)));
      const double h = 1e-6;
      atmax = std::max(atmax, std::abs(C.a(x, t + h) - C.a(x, t - h)) / (2 * h));
      axmax = std::max(axmax, std::abs(C.a(x + h, t) - C.a(x - h, t)) / (2 * h));
    }
  auto warn = [&](const std::optional<double>& bound, double seen, bool is_min, const char* name) {
    if (!bound) return;
    if (is_min ? seen < *bound : seen > *bound) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "sampled %s = %.6g contradicts declared bound %.6g", name, seen, *bound);
      out.emplace_back(buf);
    }
  };
  warn(B.a_min, amin, true, "min a");
  warn(B.a_max, amax, false, "max a");
  warn(B.b_abs, bmax, false, "max |b|");
  warn(B.c_abs, cmax, false, "max |c|");
  warn(B.a_t_abs, atmax, false, "max |a_t|");
  warn(B.a_x_abs, axmax, false, "max |a_x|");
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

BoundaryCondition bc_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "dirichlet_zero") return BoundaryCondition::dirichlet_zero();
  if (type == "dirichlet") return BoundaryCondition::dirichlet(Field::from_json(j.at("value")));
  if (type == "neumann") return BoundaryCondition::neumann();
  if (type == "robin") return BoundaryCondition::robin(Field::from_json(j.at("beta")));
  if (type == "flux") return BoundaryCondition::nonlinear_flux(Field::from_json(j.at("g")), j.value("h4", false));
  if (type == "stefan") return BoundaryCondition::stefan(j.value("mu", 1.0));
  throw ParseError("unknown boundary type '" + type + "'");
}

json bc_to_json(const BoundaryCondition& bc) {
  json j{{"type", to_string(bc.kind)}};
  switch (bc.kind) {
    case BoundaryKind::DirichletValue: j["value"] = bc.value.to_json(); break;
    case BoundaryKind::Robin: j["beta"] = bc.beta.to_json(); break;
    case BoundaryKind::NonlinearFlux:
      j["g"] = bc.flux.to_json();
      j["h4"] = bc.h4;
      break;
    case BoundaryKind::FreeStefan: j["mu"] = bc.mu; break;
    default: break;
  }
  return j;
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& dst) {
  if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

template <class T>
void write_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

ScenarioConfig build_scenario(const json& j) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  ScenarioConfig cfg;
  try {
    cfg.id = j.value("id", cfg.id);
    if (j.contains("coefficients")) {
      const auto& c = j.at("coefficients");
      if (c.contains("a")) cfg.coefficients.a = Field::from_json(c.at("a"));
      if (c.contains("b")) cfg.coefficients.b = Field::from_json(c.at("b"));
      if (c.contains("c")) cfg.coefficients.c = Field::from_json(c.at("c"));
      if (c.contains("radial")) cfg.coefficients.b = Field::radial(c.at("radial").get<int>());
      if (c.contains("f") && !c.at("f").is_null()) cfg.coefficients.f = Field::from_json(c.at("f"));
      cfg.coefficients.smoothness = c.value("smoothness", cfg.coefficients.smoothness);
      if (c.contains("bounds")) {
        const auto& b = c.at("bounds");
        auto& B = cfg.coefficients.bounds;
        read_opt(b, "a_min", B.a_min);
        read_opt(b, "a_max", B.a_max);
        read_opt(b, "b_abs", B.b_abs);
        read_opt(b, "c_abs", B.c_abs);
        read_opt(b, "a_t_abs", B.a_t_abs);
        read_opt(b, "a_x_abs", B.a_x_abs);
      }
    }
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      if (d.contains("left")) cfg.domain.left = Field::from_json(d.at("left"));
      if (d.contains("right")) cfg.domain.right = Field::from_json(d.at("right"));
      if (d.contains("c1")) {
        cfg.domain.c1_declared = true;
        for (const auto& iv : d.at("c1")) cfg.domain.c1_intervals.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
      }
      read_opt(d, "lipschitz", cfg.domain.lipschitz);
    }
    if (j.contains("boundary")) {
      const auto& b = j.at("boundary");
      if (b.contains("left")) cfg.left = bc_from_json(b.at("left"));
      if (b.contains("right")) cfg.right = bc_from_json(b.at("right"));
    }
    if (!j.contains("initial")) throw ParseError("missing 'initial' profile");
    cfg.initial = Field::from_json(j.at("initial"));
    if (j.contains("time")) {
      const auto& t = j.at("time");
      cfg.time.t0 = t.value("t0", cfg.time.t0);
      cfg.time.horizon = t.value("horizon", cfg.time.horizon);
      cfg.time.dt = t.value("dt", cfg.time.dt);
      cfg.time.output_every = t.value("output_every", cfg.time.output_every);
      read_opt(t, "period", cfg.time.period);
    }
    if (j.contains("grid")) cfg.nodes = j.at("grid").value("nodes", cfg.nodes);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      cfg.tol.zero = t.value("zero", cfg.tol.zero);
      cfg.tol.degenerate = t.value("degenerate", cfg.tol.degenerate);
      cfg.tol.burn_in = t.value("burn_in", cfg.tol.burn_in);
      cfg.tol.drop_window = t.value("drop_window", cfg.tol.drop_window);
      cfg.tol.moment_window = t.value("moment_window", cfg.tol.moment_window);
      cfg.tol.alternations = t.value("alternations", cfg.tol.alternations);
    }
    if (j.contains("output")) {
      cfg.output.plots = j.at("output").value("plots", false);
      cfg.output.export_trajectory = j.at("output").value("export", false);
    }
    if (j.contains("half_line") && !j.at("half_line").is_null()) {
      const auto& h = j.at("half_line");
      cfg.half_line = true;
      cfg.support_tol = h.value("support_tol", cfg.support_tol);
      read_opt(h, "analysis_length", cfg.analysis_length);
    }
    if (j.contains("solver")) cfg.rannacher_steps = j.at("solver").value("rannacher_steps", cfg.rannacher_steps);
    if (j.contains("stefan")) cfg.front_min_gap = j.at("stefan").value("min_gap", cfg.front_min_gap);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig build_scenario(const std::string& source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  return build_scenario(j);
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["id"] = cfg.id;
  json c{{"a", cfg.coefficients.a.to_json()},
         {"b", cfg.coefficients.b.to_json()},
         {"c", cfg.coefficients.c.to_json()},
         {"smoothness", cfg.coefficients.smoothness}};
  if (cfg.coefficients.f) c["f"] = cfg.coefficients.f->to_json();
  json b = json::object();
  const auto& B = cfg.coefficients.bounds;
  write_opt(b, "a_min", B.a_min);
  write_opt(b, "a_max", B.a_max);
  write_opt(b, "b_abs", B.b_abs);
  write_opt(b, "c_abs", B.c_abs);
  write_opt(b, "a_t_abs", B.a_t_abs);
  write_opt(b, "a_x_abs", B.a_x_abs);
  if (!b.empty()) c["bounds"] = b;
  j["coefficients"] = c;
  json d{{"left", cfg.domain.left.to_json()}, {"right", cfg.domain.right.to_json()}};
  if (cfg.domain.c1_declared) {
    json iv = json::array();
    for (const auto& [p, q] : cfg.domain.c1_intervals) iv.push_back({p, q});
    d["c1"] = iv;
  }
  write_opt(d, "lipschitz", cfg.domain.lipschitz);
  j["domain"] = d;
  j["boundary"] = {{"left", bc_to_json(cfg.left)}, {"right", bc_to_json(cfg.right)}};
  j["initial"] = cfg.initial.to_json();
  json t{{"t0", cfg.time.t0}, {"horizon", cfg.time.horizon}, {"dt", cfg.time.dt}, {"output_every", cfg.time.output_every}};
  write_opt(t, "period", cfg.time.period);
  j["time"] = t;
  j["grid"] = {{"nodes", cfg.nodes}};
  j["tolerances"] = {{"zero", cfg.tol.zero},
                     {"degenerate", cfg.tol.degenerate},
                     {"burn_in", cfg.tol.burn_in},
                     {"drop_window", cfg.tol.drop_window},
                     {"moment_window", cfg.tol.moment_window},
                     {"alternations", cfg.tol.alternations}};
  j["output"] = {{"plots", cfg.output.plots}, {"export", cfg.output.export_trajectory}};
  if (cfg.half_line) {
    json h{{"support_tol", cfg.support_tol}};
    write_opt(h, "analysis_length", cfg.analysis_length);
    j["half_line"] = h;
  }
  j["solver"] = {{"rannacher_steps", cfg.rannacher_steps}};
  if (cfg.is_free_boundary()) j["stefan"] = {{"min_gap", cfg.front_min_gap}};
  return j;
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace zlab
