// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include "conecert/linalg.hpp"

namespace conecert {

// Dense two-phase simplex for the small exact LPs that back the polyhedral
// (orthant) code paths: exposing-vector search, sign-pattern feasibility and
// the test oracles. Standard form: min c'x  s.t.  A x = b, x >= 0.
struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  Vec x;
  double objective = 0.0;
};

LpResult solve_lp(const Mat& a, const Vec& b, const Vec& c);

// Feasibility-only convenience: is {x >= 0 : A x = b} nonempty?
bool lp_feasible(const Mat& a, const Vec& b, Vec* point = nullptr);

}  // namespace conecert
