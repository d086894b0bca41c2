#include "zerolab/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

#include "zerolab/error.hpp"

namespace zlab {

namespace {

using Op = Expr::Op;
using Instr = Expr::Instr;

class Parser {
 public:
  explicit Parser(const std::string& s) : src_(s) {}

  std::vector<Instr> parse() {
    parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return std::move(code_);
  }

 private:
  void fail(const std::string& msg) const {
    throw ParseError("expression \"" + src_ + "\" at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void parse_sum() {
    parse_product();
    for (;;) {
      if (accept('+')) {
        parse_product();
        code_.push_back({Op::Add, 0});
      } else if (accept('-')) {
        parse_product();
        code_.push_back({Op::Sub, 0});
      } else {
        return;
      }
    }
  }

  void parse_product() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        code_.push_back({Op::Mul, 0});
      } else if (accept('/')) {
        parse_unary();
        code_.push_back({Op::Div, 0});
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      code_.push_back({Op::Neg, 0});
    } else if (accept('+')) {
      parse_unary();
    } else {
      parse_power();
    }
  }

  void parse_power() {
    parse_atom();
    if (accept('^')) {
      parse_unary();  // right associative, allows 2^-1
      code_.push_back({Op::Pow, 0});
    }
  }

  void parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      parse_sum();
      expect(')');
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      code_.push_back({Op::Push, v});
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      const std::string name = src_.substr(start, pos_ - start);
      if (name == "x") return code_.push_back({Op::X, 0});
      if (name == "t") return code_.push_back({Op::T, 0});
      if (name == "u") return code_.push_back({Op::U, 0});
      if (name == "pi") return code_.push_back({Op::Push, std::numbers::pi});
      if (name == "e") return code_.push_back({Op::Push, std::numbers::e});
      struct Fn {
        const char* name;
        Op op;
        int arity;
      };
      static constexpr std::array<Fn, 7> fns{{{"sin", Op::Sin, 1},
                                              {"cos", Op::Cos, 1},
                                              {"exp", Op::Exp, 1},
                                              {"sqrt", Op::Sqrt, 1},
                                              {"abs", Op::Abs, 1},
                                              {"min", Op::Min, 2},
                                              {"max", Op::Max, 2}}};
      for (const auto& fn : fns) {
        if (name != fn.name) continue;
        expect('(');
        parse_sum();
        for (int k = 1; k < fn.arity; ++k) {
          expect(',');
          parse_sum();
        }
        expect(')');
        code_.push_back({fn.op, 0});
        return;
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  std::vector<Instr> code_;
};

}  // namespace

Expr::Expr(std::string source) : source_(std::move(source)) {
  code_ = Parser(source_).parse();
  int depth = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::Push:
      case Op::X:
      case Op::T:
      case Op::U:
        ++depth;
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow:
      case Op::Min:
      case Op::Max:
        --depth;
        break;
      default:
        break;
    }
    max_depth_ = std::max(max_depth_, depth);
    if (in.op == Op::X) uses_[0] = true;
    if (in.op == Op::T) uses_[1] = true;
    if (in.op == Op::U) uses_[2] = true;
  }
  if (max_depth_ > 64) throw ParseError("expression \"" + source_ + "\" nests too deeply");
}

double Expr::eval(double x, double t, double u) const {
  std::array<double, 64> st;
  int sp = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::Push: st[sp++] = in.value; break;
      case Op::X: st[sp++] = x; break;
      case Op::T: st[sp++] = t; break;
      case Op::U: st[sp++] = u; break;
      case Op::Add: --sp; st[sp - 1] += st[sp]; break;
      case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
      case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
      case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
      case Op::Pow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
      case Op::Min: --sp; st[sp - 1] = std::min(st[sp - 1], st[sp]); break;
      case Op::Max: --sp; st[sp - 1] = std::max(st[sp - 1], st[sp]); break;
      case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Op::Sqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
      case Op::Abs: st[sp - 1] = std::abs(st[sp - 1]); break;
    }
  }
  return sp == 1 ? st[0] : 0.0;
}

}  // namespace zlab
