// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <memory>

#include "conecert/facered.hpp"

namespace conecert {

struct AnalyzeOptions {
  CqParams cq;                 // eps, samples, budget, seed, tol_rank, tol_feas
  int multiplier_count = 10;
  int direction_count = 16;
  int fr_samples = 32;
  double so_tol = 1e-7;        // ssoc / invariance tolerance
};

struct AnalyzeResult {
  std::shared_ptr<ReducedProblem> rp;
  FirstOrderData fod;
  CqReport cq;
  MultiplierSet mset;
  std::vector<Vec> multipliers;
  std::vector<Vec> directions;
  SsocResult ssoc;
  InvarianceResult invariance;
  FacialReductionResult fr;    // audit-only run (no file written here)
  std::vector<std::string> violations;
  AnalyzeOptions options;
};

// Full pipeline at a feasible point: reduction, first-order data, CQ
// verdicts, multipliers, second-order checks and the FR audit.
AnalyzeResult analyze(const ProblemDef& p, const Vec& x, const AnalyzeOptions& opt);

Json report_to_json(const AnalyzeResult& r);
std::string report_to_text(const AnalyzeResult& r);

}  // namespace conecert
