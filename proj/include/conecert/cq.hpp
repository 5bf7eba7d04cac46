// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>
#include <string>

#include "conecert/analysis.hpp"

namespace conecert {

enum class Verdict { kHolds, kFails, kInconclusive };
enum class VerdictMode { kExact, kSampled };

std::string to_string(Verdict v);
std::string to_string(VerdictMode m);

struct ConditionReport {
  Verdict verdict = Verdict::kInconclusive;
  VerdictMode mode = VerdictMode::kSampled;
  std::string witness;   // what certifies or refutes the condition
  double value = 0.0;    // margin / rank / residual, condition-specific
  std::optional<FaceDesc> witness_face;
};

struct CqParams {
  double eps = 1e-3;   // neighborhood radius, scaled by (1 + |xbar|)
  int samples = 64;
  int budget = 32;
  std::uint64_t seed = 42;
  double tol_rank = 1e-8;
  double tol_feas = 1e-8;
  int max_iter = 20000;
};

// dim DGbar(x)*[F^perp] as a numeric rank; empty perp basis has rank 0.
int rank_of_pullback(const ReducedProblem& rp, const Vec& x, const FaceDesc& f,
                     double tol_rank);

struct RankConstancy {
  bool constant = true;
  int rank = 0;          // at xbar
  Vec witness_x;         // sample with a different rank, when varying
  int witness_rank = 0;
};
RankConstancy rank_constancy(const ReducedProblem& rp, const FaceDesc& f, double eps,
                             int samples, std::uint64_t seed, double tol_rank);

ConditionReport robinson_check(const ReducedProblem& rp, const FirstOrderData& fod,
                               double tol);
ConditionReport nondegeneracy_check(const ReducedProblem& rp, double tol_rank);

// Theorem-5.2-style closedness probe of H(x) = DGbar(x)*[C_polar] at the face
// F = F_min(Gamma at x): checks M*[F^triangle] = M*[F^perp] by +-v conic
// feasibility. Polyhedral (all-orthant) cones are closed unconditionally.
ConditionReport h_closedness(const ReducedProblem& rp, const Vec& x,
                             const FaceDesc& f_at_x, double tol, int max_iter = 20000);

ConditionReport crcq_check(const ReducedProblem& rp, const FirstOrderData& fod,
                           const CqParams& params);
ConditionReport crsc_check(const ReducedProblem& rp, const FirstOrderData& fod,
                           const CqParams& params);
ConditionReport strong_crsc_check(const ReducedProblem& rp, const FirstOrderData& fod,
                                  const CqParams& params);

struct CqReport {
  CqParams params;
  ConditionReport robinson;
  ConditionReport nondegeneracy;
  ConditionReport crcq;
  ConditionReport crsc;
  ConditionReport strong_crsc;
  ConditionReport h_closed;
};

CqReport run_cq(const ReducedProblem& rp, const FirstOrderData& fod,
                const CqParams& params);

// Violations of the known implication order, flagged only between verdicts
// both certified exact: Robinson => CRSC, CRCQ => Strong-CRSC => CRSC,
// nondegeneracy => Robinson.
std::vector<std::string> implication_audit(const CqReport& report);

}  // namespace conecert
