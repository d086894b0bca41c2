#pragma once

#include <string>
#include <vector>

namespace zlab {

/// Compiled arithmetic expression over the variables x, t and u.
///
/// Grammar: numbers, `x`, `t`, `u`, `pi`, `e`, binary + - * / ^, unary
/// minus, parentheses, and the functions sin, cos, exp, sqrt, abs,
/// min(a,b), max(a,b). `^` is right associative and binds tighter than
/// unary minus, so `-x^2` is `-(x^2)`.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::string source);

  double eval(double x, double t, double u = 0.0) const;

  const std::string& source() const noexcept { return source_; }
  bool uses_x() const noexcept { return uses_[0]; }
  bool uses_t() const noexcept { return uses_[1]; }
  bool uses_u() const noexcept { return uses_[2]; }
  bool is_constant() const noexcept { return !uses_[0] && !uses_[1] && !uses_[2]; }

  enum class Op : unsigned char { Push, X, T, U, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt, Abs, Min, Max };
  struct Instr {
    Op op;
    double value;
  };

 private:
  std::string source_;
  std::vector<Instr> code_;
  int max_depth_ = 0;
  bool uses_[3] = {false, false, false};
};

}  // namespace zlab
