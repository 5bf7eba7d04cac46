// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace conecert {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;

// Tableau simplex with Bland's rule. Columns 0..ncols-1 are the variables,
// the last tableau column is the rhs. basis[i] is the variable of row i.
struct Tableau {
  Mat t;                  // (m+1) x (ncols+1); last row is the objective
  std::vector<int> basis;

  int rows() const { return static_cast<int>(t.rows()) - 1; }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void price_out_basis() {
    for (int i = 0; i < rows(); ++i) {
      const double cb = t(rows(), basis[i]);
      if (std::abs(cb) > 0) t.row(rows()) -= cb * t.row(i);
    }
  }

  // Returns kOptimal or kUnbounded.
  LpResult::Status iterate() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {  // Bland: lowest eligible index
        if (t(rows(), j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpResult::Status::kOptimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        const double a = t(i, enter);
        if (a > kPivotTol) {
          const double ratio = t(i, cols()) / a;
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpResult::Status::kUnbounded;
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i <= rows(); ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (std::abs(f) > 0) t.row(i) -= f * t.row(row);
    }
    basis[row] = col;
  }
};

}  // namespace

LpResult solve_lp(const Mat& a0, const Vec& b0, const Vec& c) {
  const int m = static_cast<int>(a0.rows());
  const int n = static_cast<int>(a0.cols());
  Mat a = a0;
  Vec b = b0;
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }
  }

  // Phase 1: minimize the sum of artificials n..n+m-1.
  Tableau tb;
  tb.t = Mat::Zero(m + 1, n + m + 1);
  tb.t.block(0, 0, m, n) = a;
  tb.t.block(0, n, m, m) = Mat::Identity(m, m);
  tb.t.col(n + m).head(m) = b;
  for (int j = n; j < n + m; ++j) tb.t(m, j) = 1.0;
  tb.basis.resize(m);
  for (int i = 0; i < m; ++i) tb.basis[i] = n + i;
  tb.price_out_basis();
  tb.iterate();  // phase-1 objective is bounded below by 0

  LpResult out;
  if (tb.t(m, n + m) < -kFeasTol) {  // objective row holds -value
    out.status = LpResult::Status::kInfeasible;
    return out;
  }

  // Drive any artificial still basic at level zero out of the basis.
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] >= n) {
      int piv = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(tb.t(i, j)) > kPivotTol) {
          piv = j;
          break;
        }
      }
      if (piv >= 0) tb.pivot(i, piv);
      // else: the row is redundant; the artificial stays basic at zero.
    }
  }

  // Phase 2: swap in the real objective and forbid artificial columns.
  tb.t.row(m).setZero();
  for (int j = 0; j < n; ++j) tb.t(m, j) = c[j];
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] >= n) tb.t.row(i).segment(n, m).setZero();
  tb.t.block(0, n, m + 1, m).setZero();
  tb.price_out_basis();
  const LpResult::Status st = tb.iterate();

  out.status = st;
  if (st == LpResult::Status::kOptimal) {
    out.x = Vec::Zero(n);
    for (int i = 0; i < m; ++i)
      if (tb.basis[i] < n) out.x[tb.basis[i]] = tb.t(i, n + m);
    out.objective = c.dot(out.x);
  }
  return out;
}

bool lp_feasible(const Mat& a, const Vec& b, Vec* point) {
  LpResult r = solve_lp(a, b, Vec::Zero(a.cols()));
  if (r.status != LpResult::Status::kOptimal) return false;
  if (point) *point = r.x;
  return true;
}

}  // namespace conecert
