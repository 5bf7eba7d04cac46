// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <memory>
#include <string>

#include "conecert/linalg.hpp"

namespace conecert {

// Immutable scalar expression tree over variables x1..xn with exact
// forward-mode first and second derivatives. Supported nodes: constants,
// variables, + - * /, integer powers, exp, log, sin, cos, sqrt.
class Expr {
 public:
  Expr();  // the constant 0
  static Expr constant(double v);
  static Expr variable(int index);  // 0-based

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr pow(int k) const;

  static Expr exp(const Expr& a);
  static Expr log(const Expr& a);
  static Expr sin(const Expr& a);
  static Expr cos(const Expr& a);
  static Expr sqrt(const Expr& a);

  double eval(const Vec& x) const;
  // value and gradient (forward mode, n = x.size())
  void eval_grad(const Vec& x, double* v, Vec* g) const;
  // value, gradient and dense Hessian
  void eval_hess(const Vec& x, double* v, Vec* g, Mat* h) const;
  // second-order jet along direction d: value, <grad,d>, d'H d
  void eval_jet2(const Vec& x, const Vec& d, double* v, double* dv, double* ddv) const;

  bool is_zero() const;        // syntactic zero
  int min_vars() const;        // 1 + largest variable index used
  std::string to_string() const;

  struct Node;  // shared immutable tree node

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Parses infix expression text with variables x1..xn, `^` for integer powers
// and functions exp, log, sin, cos, sqrt. Throws ParseError with a position.
Expr parse_expr(const std::string& text, int n);

}  // namespace conecert
