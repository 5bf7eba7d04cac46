// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "conecert/errors.hpp"

namespace conecert {

namespace {
enum class Op {
  kConst,
  kVar,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kPow,
  kExp,
  kLog,
  kSin,
  kCos,
  kSqrt
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

struct Expr::Node {
  Op op = Op::kConst;
  double value = 0.0;
  int index = 0;  // variable index or integer exponent
  std::shared_ptr<const Node> a, b;
};

Expr::Expr() : node_(std::make_shared<Node>()) {}

Expr Expr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw ParseError("variable index must be nonnegative");
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->index = index;
  return Expr(std::move(n));
}

#define CONECERT_BINARY(name, opcode)                \
  Expr operator name(const Expr& a, const Expr& b) { \
    auto n = std::make_shared<Expr::Node>();         \
    n->op = opcode;                                  \
    n->a = a.node_;                                  \
    n->b = b.node_;                                  \
    return Expr(std::move(n));                       \
  }

CONECERT_BINARY(+, Op::kAdd)
CONECERT_BINARY(-, Op::kSub)
CONECERT_BINARY(*, Op::kMul)
CONECERT_BINARY(/, Op::kDiv)
#undef CONECERT_BINARY

Expr Expr::operator-() const {
  auto n = std::make_shared<Node>();
  n->op = Op::kNeg;
  n->a = node_;
  return Expr(std::move(n));
}

Expr Expr::pow(int k) const {
  auto n = std::make_shared<Node>();
  n->op = Op::kPow;
  n->index = k;
  n->a = node_;
  return Expr(std::move(n));
}

Expr Expr::exp(const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = Op::kExp;
  n->a = a.node_;
  return Expr(std::move(n));
}
Expr Expr::log(const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = Op::kLog;
  n->a = a.node_;
  return Expr(std::move(n));
}
Expr Expr::sin(const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = Op::kSin;
  n->a = a.node_;
  return Expr(std::move(n));
}
Expr Expr::cos(const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = Op::kCos;
  n->a = a.node_;
  return Expr(std::move(n));
}
Expr Expr::sqrt(const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = Op::kSqrt;
  n->a = a.node_;
  return Expr(std::move(n));
}

namespace {

[[noreturn]] void domain_error(const char* what, const Expr::Node* n);

std::string node_str(const Expr::Node* n);

struct Jet2 {
  double v = 0, d1 = 0, d2 = 0;
};

double eval_node(const Expr::Node* n, const Vec& x) {
  switch (n->op) {
    case Op::kConst:
      return n->value;
    case Op::kVar:
      if (n->index >= x.size()) throw EvalError("variable index out of range");
      return x[n->index];
    case Op::kAdd:
      return eval_node(n->a.get(), x) + eval_node(n->b.get(), x);
    case Op::kSub:
      return eval_node(n->a.get(), x) - eval_node(n->b.get(), x);
    case Op::kMul:
      return eval_node(n->a.get(), x) * eval_node(n->b.get(), x);
    case Op::kDiv: {
      const double b = eval_node(n->b.get(), x);
      if (b == 0.0) domain_error("division by zero", n);
      return eval_node(n->a.get(), x) / b;
    }
    case Op::kNeg:
      return -eval_node(n->a.get(), x);
    case Op::kPow: {
      const double a = eval_node(n->a.get(), x);
      if (n->index < 0 && a == 0.0) domain_error("zero to negative power", n);
      return std::pow(a, n->index);
    }
    case Op::kExp:
      return std::exp(eval_node(n->a.get(), x));
    case Op::kLog: {
      const double a = eval_node(n->a.get(), x);
      if (a <= 0.0) domain_error("log of nonpositive value", n);
      return std::log(a);
    }
    case Op::kSin:
      return std::sin(eval_node(n->a.get(), x));
    case Op::kCos:
      return std::cos(eval_node(n->a.get(), x));
    case Op::kSqrt: {
      const double a = eval_node(n->a.get(), x);
      if (a < 0.0) domain_error("sqrt of negative value", n);
      return std::sqrt(a);
    }
  }
  return 0.0;
}

Jet2 jet_node(const Expr::Node* n, const Vec& x, const Vec& d) {
  switch (n->op) {
    case Op::kConst:
      return {n->value, 0, 0};
    case Op::kVar:
      return {x[n->index], d[n->index], 0};
    case Op::kAdd: {
      Jet2 a = jet_node(n->a.get(), x, d), b = jet_node(n->b.get(), x, d);
      return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
    }
    case Op::kSub: {
      Jet2 a = jet_node(n->a.get(), x, d), b = jet_node(n->b.get(), x, d);
      return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
    }
    case Op::kMul: {
      Jet2 a = jet_node(n->a.get(), x, d), b = jet_node(n->b.get(), x, d);
      return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
              a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2};
    }
    case Op::kDiv: {
      Jet2 a = jet_node(n->a.get(), x, d), b = jet_node(n->b.get(), x, d);
      if (b.v == 0.0) domain_error("division by zero", n);
      const double v = a.v / b.v;
      const double d1 = (a.d1 - v * b.d1) / b.v;
      const double d2 = (a.d2 - 2 * d1 * b.d1 - v * b.d2) / b.v;
      return {v, d1, d2};
    }
    case Op::kNeg: {
      Jet2 a = jet_node(n->a.get(), x, d);
      return {-a.v, -a.d1, -a.d2};
    }
    case Op::kPow: {
      Jet2 a = jet_node(n->a.get(), x, d);
      const int k = n->index;
      if (k == 0) return {1, 0, 0};
      if (k < 0 && a.v == 0.0) domain_error("zero to negative power", n);
      const double pk2 = (k == 1) ? 0.0 : std::pow(a.v, k - 2);
      const double pk1 = (k == 1) ? 1.0 : pk2 * a.v;
      const double pk0 = pk1 * a.v;
      return {pk0, k * pk1 * a.d1,
              k * (k - 1) * pk2 * a.d1 * a.d1 + k * pk1 * a.d2};
    }
    case Op::kExp: {
      Jet2 a = jet_node(n->a.get(), x, d);
      const double v = std::exp(a.v);
      return {v, v * a.d1, v * (a.d2 + a.d1 * a.d1)};
    }
    case Op::kLog: {
      Jet2 a = jet_node(n->a.get(), x, d);
      if (a.v <= 0.0) domain_error("log of nonpositive value", n);
      const double d1 = a.d1 / a.v;
      return {std::log(a.v), d1, a.d2 / a.v - d1 * d1};
    }
    case Op::kSin: {
      Jet2 a = jet_node(n->a.get(), x, d);
      const double s = std::sin(a.v), c = std::cos(a.v);
      return {s, c * a.d1, c * a.d2 - s * a.d1 * a.d1};
    }
    case Op::kCos: {
      Jet2 a = jet_node(n->a.get(), x, d);
      const double s = std::sin(a.v), c = std::cos(a.v);
      return {c, -s * a.d1, -s * a.d2 - c * a.d1 * a.d1};
    }
    case Op::kSqrt: {
      Jet2 a = jet_node(n->a.get(), x, d);
      if (a.v < 0.0) domain_error("sqrt of negative value", n);
      if (a.v == 0.0) {
        if (a.d1 == 0.0 && a.d2 == 0.0) return {0, 0, 0};
        domain_error("sqrt not differentiable at zero", n);
      }
      const double v = std::sqrt(a.v);
      const double d1 = a.d1 / (2 * v);
      return {v, d1, a.d2 / (2 * v) - a.d1 * a.d1 / (4 * v * a.v)};
    }
  }
  return {};
}

struct GradVal {
  double v = 0;
  Vec g;
};

GradVal grad_node(const Expr::Node* n, const Vec& x) {
  const int nn = static_cast<int>(x.size());
  switch (n->op) {
    case Op::kConst:
      return {n->value, Vec::Zero(nn)};
    case Op::kVar: {
      Vec g = Vec::Zero(nn);
      g[n->index] = 1.0;
      return {x[n->index], std::move(g)};
    }
    case Op::kAdd: {
      GradVal a = grad_node(n->a.get(), x), b = grad_node(n->b.get(), x);
      return {a.v + b.v, a.g + b.g};
    }
    case Op::kSub: {
      GradVal a = grad_node(n->a.get(), x), b = grad_node(n->b.get(), x);
      return {a.v - b.v, a.g - b.g};
    }
    case Op::kMul: {
      GradVal a = grad_node(n->a.get(), x), b = grad_node(n->b.get(), x);
      return {a.v * b.v, a.g * b.v + b.g * a.v};
    }
    case Op::kDiv: {
      GradVal a = grad_node(n->a.get(), x), b = grad_node(n->b.get(), x);
      if (b.v == 0.0) domain_error("division by zero", n);
      const double v = a.v / b.v;
      return {v, (a.g - v * b.g) / b.v};
    }
    case Op::kNeg: {
      GradVal a = grad_node(n->a.get(), x);
      return {-a.v, -a.g};
    }
    case Op::kPow: {
      GradVal a = grad_node(n->a.get(), x);
      const int k = n->index;
      if (k == 0) return {1.0, Vec::Zero(nn)};
      if (k < 0 && a.v == 0.0) domain_error("zero to negative power", n);
      const double pk1 = (k == 1) ? 1.0 : std::pow(a.v, k - 1);
      return {pk1 * a.v, k * pk1 * a.g};
    }
    case Op::kExp: {
      GradVal a = grad_node(n->a.get(), x);
      const double v = std::exp(a.v);
      return {v, v * a.g};
    }
    case Op::kLog: {
      GradVal a = grad_node(n->a.get(), x);
      if (a.v <= 0.0) domain_error("log of nonpositive value", n);
      return {std::log(a.v), a.g / a.v};
    }
    case Op::kSin: {
      GradVal a = grad_node(n->a.get(), x);
      return {std::sin(a.v), std::cos(a.v) * a.g};
    }
    case Op::kCos: {
      GradVal a = grad_node(n->a.get(), x);
      return {std::cos(a.v), -std::sin(a.v) * a.g};
    }
    case Op::kSqrt: {
      GradVal a = grad_node(n->a.get(), x);
      if (a.v < 0.0) domain_error("sqrt of negative value", n);
      if (a.v == 0.0) {
        if (a.g.norm() == 0.0) return {0.0, Vec::Zero(nn)};
        domain_error("sqrt not differentiable at zero", n);
      }
      const double v = std::sqrt(a.v);
      return {v, a.g / (2 * v)};
    }
  }
  return {0, Vec::Zero(nn)};
}

struct HessVal {
  double v = 0;
  Vec g;
  Mat h;
};

HessVal hess_node(const Expr::Node* n, const Vec& x) {
  const int nn = static_cast<int>(x.size());
  switch (n->op) {
    case Op::kConst:
      return {n->value, Vec::Zero(nn), Mat::Zero(nn, nn)};
    case Op::kVar: {
      Vec g = Vec::Zero(nn);
      g[n->index] = 1.0;
      return {x[n->index], std::move(g), Mat::Zero(nn, nn)};
    }
    case Op::kAdd: {
      HessVal a = hess_node(n->a.get(), x), b = hess_node(n->b.get(), x);
      return {a.v + b.v, a.g + b.g, a.h + b.h};
    }
    case Op::kSub: {
      HessVal a = hess_node(n->a.get(), x), b = hess_node(n->b.get(), x);
      return {a.v - b.v, a.g - b.g, a.h - b.h};
    }
    case Op::kMul: {
      HessVal a = hess_node(n->a.get(), x), b = hess_node(n->b.get(), x);
      return {a.v * b.v, a.g * b.v + b.g * a.v,
              a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose()};
    }
    case Op::kDiv: {
      HessVal a = hess_node(n->a.get(), x), b = hess_node(n->b.get(), x);
      if (b.v == 0.0) domain_error("division by zero", n);
      const double v = a.v / b.v;
      Vec g = (a.g - v * b.g) / b.v;
      Mat h = (a.h - g * b.g.transpose() - b.g * g.transpose() - v * b.h) / b.v;
      return {v, std::move(g), std::move(h)};
    }
    case Op::kNeg: {
      HessVal a = hess_node(n->a.get(), x);
      return {-a.v, -a.g, -a.h};
    }
    case Op::kPow: {
      HessVal a = hess_node(n->a.get(), x);
      const int k = n->index;
      if (k == 0) return {1.0, Vec::Zero(nn), Mat::Zero(nn, nn)};
      if (k < 0 && a.v == 0.0) domain_error("zero to negative power", n);
      const double pk2 = (k == 1) ? 0.0 : std::pow(a.v, k - 2);
      const double pk1 = (k == 1) ? 1.0 : pk2 * a.v;
      return {pk1 * a.v, k * pk1 * a.g,
              k * (k - 1) * pk2 * a.g * a.g.transpose() + k * pk1 * a.h};
    }
    case Op::kExp: {
      HessVal a = hess_node(n->a.get(), x);
      const double v = std::exp(a.v);
      return {v, v * a.g, v * (a.h + a.g * a.g.transpose())};
    }
    case Op::kLog: {
      HessVal a = hess_node(n->a.get(), x);
      if (a.v <= 0.0) domain_error("log of nonpositive value", n);
      return {std::log(a.v), a.g / a.v,
              a.h / a.v - a.g * a.g.transpose() / (a.v * a.v)};
    }
    case Op::kSin: {
      HessVal a = hess_node(n->a.get(), x);
      const double s = std::sin(a.v), c = std::cos(a.v);
      return {s, c * a.g, c * a.h - s * a.g * a.g.transpose()};
    }
    case Op::kCos: {
      HessVal a = hess_node(n->a.get(), x);
      const double s = std::sin(a.v), c = std::cos(a.v);
      return {c, -s * a.g, -s * a.h - c * a.g * a.g.transpose()};
    }
    case Op::kSqrt: {
      HessVal a = hess_node(n->a.get(), x);
      if (a.v < 0.0) domain_error("sqrt of negative value", n);
      if (a.v == 0.0) {
        if (a.g.norm() == 0.0 && a.h.norm() == 0.0)
          return {0.0, Vec::Zero(nn), Mat::Zero(nn, nn)};
        domain_error("sqrt not differentiable at zero", n);
      }
      const double v = std::sqrt(a.v);
      return {v, a.g / (2 * v),
              a.h / (2 * v) - a.g * a.g.transpose() / (4 * v * a.v)};
    }
  }
  return {0, Vec::Zero(nn), Mat::Zero(nn, nn)};
}

std::string node_str(const Expr::Node* n) {
  switch (n->op) {
    case Op::kConst:
      return fmt_double(n->value);
    case Op::kVar:
      return "x" + std::to_string(n->index + 1);
    case Op::kAdd:
      return "(" + node_str(n->a.get()) + "+" + node_str(n->b.get()) + ")";
    case Op::kSub:
      return "(" + node_str(n->a.get()) + "-" + node_str(n->b.get()) + ")";
    case Op::kMul:
      return "(" + node_str(n->a.get()) + "*" + node_str(n->b.get()) + ")";
    case Op::kDiv:
      return "(" + node_str(n->a.get()) + "/" + node_str(n->b.get()) + ")";
    case Op::kNeg:
      return "(-" + node_str(n->a.get()) + ")";
    case Op::kPow:
      return node_str(n->a.get()) + "^" +
             (n->index < 0 ? "(" + std::to_string(n->index) + ")"
                           : std::to_string(n->index));
    case Op::kExp:
      return "exp(" + node_str(n->a.get()) + ")";
    case Op::kLog:
      return "log(" + node_str(n->a.get()) + ")";
    case Op::kSin:
      return "sin(" + node_str(n->a.get()) + ")";
    case Op::kCos:
      return "cos(" + node_str(n->a.get()) + ")";
    case Op::kSqrt:
      return "sqrt(" + node_str(n->a.get()) + ")";
  }
  return "?";
}

[[noreturn]] void domain_error(const char* what, const Expr::Node* n) {
  throw EvalError(std::string(what) + " in subexpression " + node_str(n));
}

int max_var_node(const Expr::Node* n) {
  int m = -1;
  if (n->op == Op::kVar) m = n->index;
  if (n->a) m = std::max(m, max_var_node(n->a.get()));
  if (n->b) m = std::max(m, max_var_node(n->b.get()));
  return m;
}

}  // namespace

double Expr::eval(const Vec& x) const { return eval_node(node_.get(), x); }

void Expr::eval_grad(const Vec& x, double* v, Vec* g) const {
  GradVal r = grad_node(node_.get(), x);
  if (v) *v = r.v;
  if (g) *g = r.g;
}

void Expr::eval_hess(const Vec& x, double* v, Vec* g, Mat* h) const {
  HessVal r = hess_node(node_.get(), x);
  if (v) *v = r.v;
  if (g) *g = r.g;
  if (h) *h = 0.5 * (r.h + r.h.transpose());
}

void Expr::eval_jet2(const Vec& x, const Vec& d, double* v, double* dv,
                     double* ddv) const {
  Jet2 r = jet_node(node_.get(), x, d);
  if (v) *v = r.v;
  if (dv) *dv = r.d1;
  if (ddv) *ddv = r.d2;
}

bool Expr::is_zero() const {
  return node_->op == Op::kConst && node_->value == 0.0;
}

int Expr::min_vars() const { return max_var_node(node_.get()) + 1; }

std::string Expr::to_string() const { return node_str(node_.get()); }

// ------------------------------ parser ------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& text, int n) : text_(text), n_(n) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input at position " +
                       std::to_string(pos_) + " in '" + text_ + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in '" +
                     text_ + "'");
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = e + parse_term();
      else if (eat('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (eat('*'))
        e = e * parse_unary();
      else if (eat('/'))
        e = e / parse_unary();
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (eat('^')) return base.pow(parse_int_exponent());
    return base;
  }

  int parse_int_exponent() {
    skip_ws();
    bool paren = eat('(');
    bool neg = eat('-');
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer exponent");
    int k = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      k = 10 * k + (text_[pos_++] - '0');
    if (paren && !eat(')')) fail("expected ')' after exponent");
    return neg ? -k : k;
  }

  Expr parse_primary() {
    skip_ws();
    if (eat('(')) {
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("expected expression");
  }

  Expr parse_number() {
    skip_ws();
    size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
            text_[end] == 'e' || text_[end] == 'E' ||
            ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
             (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
      ++end;
    const std::string tok = text_.substr(pos_, end - pos_);
    try {
      const double v = std::stod(tok);
      pos_ = end;
      return Expr::constant(v);
    } catch (...) {
      fail("bad numeric literal '" + tok + "'");
    }
  }

  Expr parse_ident() {
    skip_ws();
    size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
      ++end;
    const std::string id = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (id.size() >= 2 && id[0] == 'x') {
      bool digits = true;
      for (size_t i = 1; i < id.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) digits = false;
      if (digits) {
        const int idx = std::stoi(id.substr(1));
        if (idx < 1 || idx > n_)
          fail("variable " + id + " out of range 1.." + std::to_string(n_));
        return Expr::variable(idx - 1);
      }
    }
    if (!eat('(')) fail("unknown identifier '" + id + "'");
    Expr arg = parse_sum();
    if (!eat(')')) fail("expected ')' after " + id);
    if (id == "exp") return Expr::exp(arg);
    if (id == "log") return Expr::log(arg);
    if (id == "sin") return Expr::sin(arg);
    if (id == "cos") return Expr::cos(arg);
    if (id == "sqrt") return Expr::sqrt(arg);
    fail("unknown function '" + id + "'");
  }

  const std::string& text_;
  int n_;
  size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, int n) { return Parser(text, n).parse(); }

}  // namespace conecert
