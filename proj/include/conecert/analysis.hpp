// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>

#include "conecert/projections.hpp"
#include "conecert/reduction.hpp"

namespace conecert {

// d in L_Omega(xbar) <=> DGbar(xbar) d in C.
bool lin_cone_member(const ReducedProblem& rp, const Vec& d, double tol);

struct GammaParams {
  double tol = 1e-9;       // "no exposing vector" threshold
  int max_iter = 20000;    // subsolver iterations
  int max_cuts = -1;       // default: face chain bound
};

// Minimal face of Gamma = M[L] with L = M^{-1}(C), computed by the
// exposing-vector loop: find nonzero S in F_polar n Ker(M*) that is strictly
// negative on ri(F), cut F <- F n {S}^perp, repeat until none exists.
struct GammaResult {
  FaceDesc face;
  std::vector<VecE> exposing;  // certificate chain, in cut order
  bool exact = false;          // orthant-only cones solve the subproblem exactly
  bool converged = true;       // false: max_cuts exceeded, face is partial
  int iterations = 0;
};

GammaResult minimal_face_gamma_m(const Mat& m, const ConeSpec& cone,
                                 const GammaParams& params = {});
GammaResult minimal_face_gamma(const ReducedProblem& rp,
                               const GammaParams& params = {});

// Direction with DGbar(xbar) d* in ri(F_J-), margin maximized; d* = 0 with a
// vacuous certificate when F_J- = {0}.
struct RiDirection {
  Vec d;
  double margin = 0.0;
  bool certified = false;
};
RiDirection ri_direction(const ReducedProblem& rp, const FaceDesc& f_jminus);

struct FirstOrderData {
  FaceDesc f_jminus;
  std::vector<VecE> exposing;
  RiDirection ri;
  bool gamma_exact = false;
  bool gamma_converged = true;
};
FirstOrderData build_first_order(const ReducedProblem& rp,
                                 const GammaParams& params = {});

// Samples directions and checks L = DGbar^{-1}(F_J-) pointwise.
bool lin_equals_face_probe(const ReducedProblem& rp, const FaceDesc& f_jminus,
                           int samples, std::uint64_t seed, double tol);

// Lagrange multipliers of the reduced problem: y in C_polar with
// DGbar(xbar)* y = -grad f(xbar), found by alternating projections.
struct MultiplierSet {
  bool found = false;
  Vec y0;             // one reduced multiplier
  VecE y0_lifted;     // DXi(ybar)*[y0]
  double residual = 0.0;
  double infeasibility = 0.0;  // least-squares certificate when not found
  Mat kernel;         // basis of Ker DGbar(xbar)* for generating more
};

MultiplierSet solve_multipliers(const ReducedProblem& rp, const Vec& gradf,
                                double tol, int max_iter = 5000);

// Further multipliers: y0 + kernel perturbations, re-projected and re-checked
// against the KKT residual bound; norms capped at 1e3 (1 + |y0|).
std::vector<Vec> sample_multipliers(const ReducedProblem& rp, const MultiplierSet& ms,
                                    const Vec& gradf, int count, std::uint64_t seed,
                                    double tol);

// Critical cone membership: d in L and <grad f, d> ~ 0.
bool critical_member(const ReducedProblem& rp, const Vec& gradf, const Vec& d,
                     double tol);

// Unit-norm sampled members of the critical cone (empty when C(xbar) = {0}).
std::vector<Vec> sample_critical_directions(const ReducedProblem& rp, const Vec& gradf,
                                            const FirstOrderData& fod, int count,
                                            std::uint64_t seed, double tol);

}  // namespace conecert
