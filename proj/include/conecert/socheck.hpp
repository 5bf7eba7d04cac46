// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include "conecert/cq.hpp"

namespace conecert {

// Numerical curve builder: predictor xbar + t d, Gauss-Newton corrector on
// the rows <Gbar(x), eta_i> = 0 for the perp basis of F, stepping only in the
// row space of the corrector Jacobian so xi'(0) = d survives.
struct TracedCurve {
  Vec direction;
  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<double> residuals;  // corrector residual per time
  Vec xi2;                        // second-order coefficient xi''(0), fitted
  bool success = true;            // every time met the residual demand
};

std::vector<double> default_curve_times();  // {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}

TracedCurve trace_curve(const ReducedProblem& rp, const Vec& d, const FaceDesc& f,
                        const std::vector<double>& times, double tol);

// Empirical tangency check of T_Omega(xbar) = L_Omega(xbar): traces curves
// along sampled ri(L) directions and demands dist(G(xi(t)), K) = o(t) with a
// fitted exponent >= 1.5.
struct TangentProbeResult {
  Verdict verdict = Verdict::kInconclusive;
  int directions = 0;
  double worst_exponent = 0.0;
  std::string witness;
};
TangentProbeResult tangent_probe(const ReducedProblem& rp, const FirstOrderData& fod,
                                 int count, std::uint64_t seed, double tol);

// d' H_f d + <D2G(xbar)[d,d], Ybar> - sigma(xbar, d, Ybar).
double ssoc_value(const ReducedProblem& rp, const Vec& d, const VecE& y_original,
                  const Vec& y_reduced);

struct SsocResult {
  Verdict verdict = Verdict::kInconclusive;
  bool applicable = false;  // false: no multiplier to test against
  double min_value = 0.0;
  int argmin_direction = -1;
  int argmin_multiplier = -1;
  int grid = 0;
};
SsocResult ssoc_check(const ReducedProblem& rp, const std::vector<Vec>& multipliers,
                      const std::vector<Vec>& directions, double tol);

// Multiplier-invariance of the second-order term, per direction.
struct InvarianceResult {
  Verdict verdict = Verdict::kInconclusive;
  bool supported = false;   // Strong-CRSC verdict backing the claim
  std::string scope;        // "critical" or "kernel"
  double max_spread = 0.0;
  std::vector<double> spreads;
};
InvarianceResult invariance_check(const ReducedProblem& rp,
                                  const std::vector<Vec>& multipliers,
                                  const std::vector<Vec>& directions, double tol,
                                  bool strong_crsc_holds,
                                  const std::string& scope = "critical");

}  // namespace conecert
