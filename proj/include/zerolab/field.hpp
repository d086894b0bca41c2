#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zerolab/expr.hpp"

namespace zlab {

using json = nlohmann::json;

/// A scalar function of (x, t, u). Coefficients ignore u; boundary data
/// ignore x; reaction and flux laws use it. Fields are immutable and cheap
/// to copy (shared implementation).
///
/// JSON forms accepted by `from_json`:
///   1.5                                      constant
///   "1 + 0.5*sin(pi*x)"                      expression (see Expr)
///   {"family": "constant", "value": v}
///   {"family": "periodic", "mean": m, "amplitude": A, "period": P, "phase": p}
///        m + A sin(2 pi t / P + p)
///   {"family": "trig", "sin": [s1..], "cos": [c0..], "origin": x0, "length": l, "half": false}
///        sum_k s_k sin(k' pi (x-x0)/l) + sum_k c_k cos(k' pi (x-x0)/l), where
///        k' = k for cos (k >= 0) and sin (k >= 1), or k - 1/2 (k >= 1) when half
///   {"family": "radial", "N": n}             (n-1)/x, singular at x = 0
///   {"family": "table", "x": [...], "t": [...], "values": [[...], ...]}
///        bilinear in (x, t), values[i_t][i_x], clamped outside the table
class Field {
 public:
  Field();  // constant zero

  static Field constant(double value);
  static Field expression(const std::string& source);
  static Field periodic(double mean, double amplitude, double period, double phase = 0.0);
  static Field radial(int dimension);
  static Field trig(std::vector<double> sin_coeffs, std::vector<double> cos_coeffs, double origin = 0.0,
                    double length = 1.0, bool half = false);
  static Field table(std::vector<double> xs, std::vector<double> ts, std::vector<std::vector<double>> values);
  static Field from_json(const json& j);

  double operator()(double x, double t, double u = 0.0) const;

  json to_json() const;
  bool is_constant() const;
  /// Value of a constant field; meaningful only when is_constant().
  double constant_value() const;
  /// True when the field does not vary with t (it may vary with x or u).
  bool is_time_independent() const;
  /// Dimension N when this is the radial drift family, 0 otherwise.
  int radial_dimension() const;

  struct Impl;

 private:
  explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

bool operator==(const Field& a, const Field& b);

}  // namespace zlab
