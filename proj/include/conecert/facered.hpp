// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include "conecert/socheck.hpp"

namespace conecert {

struct FacialReductionResult {
  bool emitted = false;
  std::string refusal;              // failed hypothesis and witness when refused
  FaceDesc face;                    // final face F
  std::vector<VecE> chain;          // exposing-vector certificates, in order
  ProblemDef reduced_problem;       // the rewritten problem (FRed form)
  double slater_margin = 0.0;       // ri margin certificate for the face block
  Vec slater_point;                 // linear FR: point with Ax+B in ri(F)
  bool chain_bound_ok = true;
  struct Audit {
    int samples = 0;
    bool a1 = true, a2 = true, a3 = true;
    Vec witness_x;
    std::string note;
  } audit;
};

// The linear conic facial reduction loop for {x : A x + B in K}: repeatedly
// find S in F_polar n Ker A* n {B}^perp and cut F <- F n {S}^perp; returns
// the final face with its certificate chain, a Slater point, and the problem
// rewritten over the face (span-membership as equality rows).
FacialReductionResult linear_facial_reduction(const Mat& a, const VecE& b,
                                              const ConeSpec& k, double tol);

struct FrParams {
  double eps = 1e-3;       // audit neighborhood radius, scaled by (1+|xbar|)
  int samples = 32;        // audit sample count
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int max_iter = 20000;
  bool crsc_holds = false;  // caller-established precondition
};

// Nonlinear facial reduction: audits A1 (closedness of H near xbar), A2 (the
// minimal face of Gamma is stable near xbar) and A3 on F_J-, then rewrites
// the problem as Gbar(x) in F_J-: equality rows for the span of F^perp plus
// the solid face block. Refuses with the failed hypothesis otherwise.
FacialReductionResult nonlinear_facial_reduction(const ReducedProblem& rp,
                                                 const FirstOrderData& fod,
                                                 const FrParams& params);

// Samples the ball and checks contains(C, Gbar(x)) <=> Gbar(x) in F.
struct EquivalenceProbe {
  Verdict verdict = Verdict::kHolds;
  int samples = 0;
  Vec witness_x;
  double cone_residual = 0.0;  // membership margins of the counterexample
  double face_residual = 0.0;
};
EquivalenceProbe local_equivalence_probe(const ReducedProblem& rp, const FaceDesc& f,
                                         double radius, int samples,
                                         std::uint64_t seed, double tol);

// Robinson's condition for an emitted (FRed) problem at xbar: full-row-rank
// equality Jacobian plus an interior margin on the solid face blocks.
struct ReducedRobinson {
  Verdict verdict = Verdict::kFails;
  double margin = 0.0;
  int eq_rank = 0;
  int eq_rows = 0;
};
ReducedRobinson reduced_robinson_verify(const ProblemDef& emitted, const Vec& xbar,
                                        double tol);

// True when every constraint entry of p is affine (second derivatives vanish).
bool problem_is_affine(const ProblemDef& p, const Vec& probe_x);

}  // namespace conecert
