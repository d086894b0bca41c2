#include "zerolab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "zerolab/error.hpp"

namespace zlab {

namespace {

struct Constant {
  double value;
};
struct Expression {
  Expr expr;
};
struct Periodic {
  double mean, amplitude, period, phase;
};
struct Trig {
  std::vector<double> s, c;
  double origin, length;
  bool half;
};
struct Radial {
  int n;
};
struct Table {
  std::vector<double> xs, ts;
  std::vector<std::vector<double>> values;
};

// Index i with xs[i] <= v <= xs[i+1] and the fractional weight, clamped.
std::pair<std::size_t, double> bracket(const std::vector<double>& xs, double v) {
  if (xs.size() == 1 || v <= xs.front()) return {0, 0.0};
  if (v >= xs.back()) return {xs.size() - 2, 1.0};
  auto it = std::upper_bound(xs.begin(), xs.end(), v);
  std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  return {i, (v - xs[i]) / (xs[i + 1] - xs[i])};
}

}  // namespace

struct Field::Impl {
  std::variant<Constant, Expression, Periodic, Trig, Radial, Table> v;
};

Field::Field() : impl_(std::make_shared<Impl>(Impl{Constant{0.0}})) {}

Field Field::constant(double value) { return Field(std::make_shared<Impl>(Impl{Constant{value}})); }

Field Field::expression(const std::string& source) {
  Expr e(source);
  if (e.is_constant()) return constant(e.eval(0, 0, 0));
  return Field(std::make_shared<Impl>(Impl{Expression{std::move(e)}}));
}

Field Field::periodic(double mean, double amplitude, double period, double phase) {
  if (!(period > 0)) throw ConfigError("periodic field needs period > 0");
  return Field(std::make_shared<Impl>(Impl{Periodic{mean, amplitude, period, phase}}));
}

Field Field::radial(int dimension) {
  if (dimension < 1) throw ConfigError("radial dimension must be >= 1");
  return Field(std::make_shared<Impl>(Impl{Radial{dimension}}));
}

Field Field::trig(std::vector<double> sin_coeffs, std::vector<double> cos_coeffs, double origin, double length,
                  bool half) {
  if (!(length > 0)) throw ConfigError("trig field needs length > 0");
  return Field(std::make_shared<Impl>(Impl{Trig{std::move(sin_coeffs), std::move(cos_coeffs), origin, length, half}}));
}

Field Field::table(std::vector<double> xs, std::vector<double> ts, std::vector<std::vector<double>> values) {
  if (xs.empty() || ts.empty()) throw ConfigError("table field needs non-empty x and t axes");
  if (values.size() != ts.size()) throw ConfigError("table field: values rows must match t axis");
  for (const auto& row : values)
    if (row.size() != xs.size()) throw ConfigError("table field: values columns must match x axis");
  if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ts.begin(), ts.end()) ||
      std::adjacent_find(xs.begin(), xs.end()) != xs.end() || std::adjacent_find(ts.begin(), ts.end()) != ts.end())
    throw ConfigError("table field axes must be strictly increasing");
  return Field(std::make_shared<Impl>(Impl{Table{std::move(xs), std::move(ts), std::move(values)}}));
}

Field Field::from_json(const json& j) {
  if (j.is_number()) return constant(j.get<double>());
  if (j.is_string()) return expression(j.get<std::string>());
  if (!j.is_object()) throw ParseError("field must be a number, an expression string or an object");
  const std::string family = j.value("family", std::string{});
  try {
    if (family == "constant") return constant(j.at("value").get<double>());
    if (family == "expr") return expression(j.at("expr").get<std::string>());
    if (family == "periodic")
      return periodic(j.value("mean", 0.0), j.value("amplitude", 0.0), j.at("period").get<double>(),
                      j.value("phase", 0.0));
    if (family == "trig")
      return trig(j.value("sin", std::vector<double>{}), j.value("cos", std::vector<double>{}),
                  j.value("origin", 0.0), j.value("length", 1.0), j.value("half", false));
    if (family == "radial") return radial(j.at("N").get<int>());
    if (family == "table")
      return table(j.at("x").get<std::vector<double>>(), j.at("t").get<std::vector<double>>(),
                   j.at("values").get<std::vector<std::vector<double>>>());
  } catch (const json::exception& e) {
    throw ParseError("field family '" + family + "': " + e.what());
  }
  throw ParseError("unknown field family '" + family + "'");
}

double Field::operator()(double x, double t, double u) const {
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Constant>) {
          return f.value;
        } else if constexpr (std::is_same_v<F, Expression>) {
          return f.expr.eval(x, t, u);
        } else if constexpr (std::is_same_v<F, Periodic>) {
          return f.mean + f.amplitude * std::sin(2.0 * std::numbers::pi * t / f.period + f.phase);
        } else if constexpr (std::is_same_v<F, Trig>) {
          const double z = std::numbers::pi * (x - f.origin) / f.length;
          const double shift = f.half ? 0.5 : 0.0;
          double acc = 0.0;
          for (std::size_t k = 0; k < f.s.size(); ++k) acc += f.s[k] * std::sin((double(k + 1) - shift) * z);
          for (std::size_t k = 0; k < f.c.size(); ++k)
            acc += f.c[k] * std::cos((f.half ? double(k + 1) - shift : double(k)) * z);
          return acc;
        } else if constexpr (std::is_same_v<F, Radial>) {
          if (f.n == 1) return 0.0;
          if (x == 0.0) return std::numeric_limits<double>::infinity();
          return (f.n - 1) / x;
        } else {
          auto [ix, wx] = bracket(f.xs, x);
          auto [it, wt] = bracket(f.ts, t);
          auto at = [&](std::size_t i, std::size_t j) {
            return f.values[std::min(i, f.ts.size() - 1)][std::min(j, f.xs.size() - 1)];
          };
          const double lo = (1 - wx) * at(it, ix) + wx * at(it, ix + 1);
          const double hi = (1 - wx) * at(it + 1, ix) + wx * at(it + 1, ix + 1);
          return (1 - wt) * lo + wt * hi;
        }
      },
      impl_->v);
}

json Field::to_json() const {
  return std::visit(
      [](const auto& f) -> json {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Constant>) {
          return f.value;
        } else if constexpr (std::is_same_v<F, Expression>) {
          return f.expr.source();
        } else if constexpr (std::is_same_v<F, Periodic>) {
          return {{"family", "periodic"}, {"mean", f.mean}, {"amplitude", f.amplitude}, {"period", f.period},
                  {"phase", f.phase}};
        } else if constexpr (std::is_same_v<F, Trig>) {
          return {{"family", "trig"}, {"sin", f.s},           {"cos", f.c},
                  {"origin", f.origin}, {"length", f.length}, {"half", f.half}};
        } else if constexpr (std::is_same_v<F, Radial>) {
          return {{"family", "radial"}, {"N", f.n}};
        } else {
          return {{"family", "table"}, {"x", f.xs}, {"t", f.ts}, {"values", f.values}};
        }
      },
      impl_->v);
}

bool Field::is_constant() const { return std::holds_alternative<Constant>(impl_->v); }

double Field::constant_value() const {
  if (const auto* c = std::get_if<Constant>(&impl_->v)) return c->value;
  return std::numeric_limits<double>::quiet_NaN();
}

bool Field::is_time_independent() const {
  return std::visit(
      [](const auto& f) -> bool {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Expression>) return !f.expr.uses_t();
        if constexpr (std::is_same_v<F, Periodic>) return f.amplitude == 0.0;
        if constexpr (std::is_same_v<F, Table>) return f.ts.size() == 1;
        return true;
      },
      impl_->v);
}

int Field::radial_dimension() const {
  if (const auto* r = std::get_if<Radial>(&impl_->v)) return r->n;
  return 0;
}

bool operator==(const Field& a, const Field& b) { return a.to_json() == b.to_json(); }

}  // namespace zlab
