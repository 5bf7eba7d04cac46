// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/cq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conecert/errors.hpp"
#include "conecert/lp.hpp"
#include "conecert/rng.hpp"

namespace conecert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_orthant(const ConeSpec& cone) {
  for (const BlockSpec& b : cone.blocks())
    if (b.kind != ConeKind::kOrthant) return false;
  return true;
}

std::string face_brief(const ConeSpec& cone, const FaceDesc& f) {
  std::ostringstream os;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    if (i) os << " x ";
    const BlockFace& bf = f.blocks[i];
    switch (cone.block(i).kind) {
      case ConeKind::kOrthant: {
        os << "orthant{zero:";
        for (size_t j = 0; j < bf.zero_set.size(); ++j)
          os << (j ? "," : "") << bf.zero_set[j] + 1;
        os << "}";
        break;
      }
      case ConeKind::kSecondOrder:
        os << (bf.soc_tag == SocFaceTag::kZero  ? "soc{zero}"
               : bf.soc_tag == SocFaceTag::kRay ? "soc{ray}"
                                                : "soc{full}");
        break;
      case ConeKind::kPsd:
        os << "psd{rank:" << bf.psd_basis.cols() << "}";
        break;
    }
  }
  if (cone.num_blocks() == 0) os << "(trivial)";
  return os.str();
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds:
      return "holds";
    case Verdict::kFails:
      return "fails";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

std::string to_string(VerdictMode m) {
  return m == VerdictMode::kExact ? "exact" : "sampled";
}

int rank_of_pullback(const ReducedProblem& rp, const Vec& x, const FaceDesc& f,
                     double tol_rank) {
  const std::vector<VecE> perp = face_perp_basis(rp.cone(), f);
  if (perp.empty()) return 0;
  const Mat m = rp.dgbar(x);  // radius-enforced through the reduction map
  Mat cols(rp.problem().n, static_cast<int>(perp.size()));
  for (int j = 0; j < cols.cols(); ++j) cols.col(j) = m.transpose() * perp[j];
  return numeric_rank(cols, tol_rank);
}

RankConstancy rank_constancy(const ReducedProblem& rp, const FaceDesc& f, double eps,
                             int samples, std::uint64_t seed, double tol_rank) {
  RankConstancy out;
  out.rank = rank_of_pullback(rp, rp.xbar(), f, tol_rank);
  const double radius = eps * (1.0 + rp.xbar().norm());
  for (const Vec& x0 : halton_ball(rp.xbar(), radius, samples, seed)) {
    Vec x = x0;
    int r = -1;
    for (int shrink = 0; shrink < 40; ++shrink) {
      try {
        r = rank_of_pullback(rp, x, f, tol_rank);
        break;
      } catch (const RadiusError&) {
        x = rp.xbar() + 0.5 * (x - rp.xbar());  // contract toward the base point
      }
    }
    if (r < 0) continue;
    if (r != out.rank) {
      out.constant = false;
      out.witness_x = x;
      out.witness_rank = r;
      return out;
    }
  }
  return out;
}

ConditionReport robinson_check(const ReducedProblem& rp, const FirstOrderData& fod,
                               double tol) {
  ConditionReport rep;
  const ConeSpec& cone = rp.cone();
  rep.mode = all_orthant(cone) ? VerdictMode::kExact : VerdictMode::kSampled;

  // Interior slack of the fully inactive (dropped) blocks at ybar; for them
  // -K + G(xbar) already covers a ball of this radius.
  double dropped_slack = kInf;
  const ReductionMap& rm = rp.reduction();
  const ConeSpec& orig = rm.original_cone();
  for (int i = 0; i < orig.num_blocks(); ++i) {
    if (rm.blocks()[i].reduced_block >= 0) continue;
    const Vec v = orig.block_of(rm.base_point(), i);
    switch (orig.block(i).kind) {
      case ConeKind::kOrthant:
        dropped_slack = std::min(dropped_slack, v.minCoeff());
        break;
      case ConeKind::kSecondOrder:
        dropped_slack = std::min(dropped_slack, v[0] - v.tail(v.size() - 1).norm());
        break;
      case ConeKind::kPsd:
        dropped_slack = std::min(dropped_slack, lambda_min(smat(v)));
        break;
    }
  }

  double margin = dropped_slack;
  if (cone.dim() > 0) {
    MarginResult mr = max_face_margin(rp.dgbar_base(), VecE::Zero(cone.dim()), cone,
                                      full_face(cone), 1.0);
    margin = std::min(margin, mr.feasible ? mr.margin : -kInf);
  }
  rep.value = margin;

  if (margin > tol) {
    rep.verdict = Verdict::kHolds;
    rep.witness = "interior direction with margin " + std::to_string(margin);
    return rep;
  }
  if (!fod.exposing.empty()) {
    rep.verdict = Verdict::kFails;
    rep.witness =
        "separating functional: exposing vector in C_polar n Ker DGbar* "
        "certifies F_Jminus != C";
    return rep;
  }
  rep.verdict = Verdict::kInconclusive;
  rep.witness = "no interior margin certified and no separating functional found";
  return rep;
}

ConditionReport nondegeneracy_check(const ReducedProblem& rp, double tol_rank) {
  ConditionReport rep;
  rep.mode = VerdictMode::kExact;
  const ConeSpec& orig = rp.original_cone();
  const VecE& ybar = rp.base().g;
  const Activity act = activity(orig, ybar, rp.feas_tol());
  const std::vector<VecE> lin = tangent_lineality_basis(orig, act);
  Mat stacked(orig.dim(), rp.problem().n + static_cast<int>(lin.size()));
  stacked.leftCols(rp.problem().n) = rp.base().dg;
  for (int j = 0; j < static_cast<int>(lin.size()); ++j)
    stacked.col(rp.problem().n + j) = lin[j];
  const int r = numeric_rank(stacked, tol_rank);
  rep.value = r;
  if (r == orig.dim()) {
    rep.verdict = Verdict::kHolds;
    rep.witness = "Im DG + lin(T_K) spans E (rank " + std::to_string(r) + ")";
  } else {
    rep.verdict = Verdict::kFails;
    rep.witness = "rank " + std::to_string(r) + " < dim E = " +
                  std::to_string(orig.dim());
  }
  return rep;
}

ConditionReport h_closedness(const ReducedProblem& rp, const Vec& x,
                             const FaceDesc& f_at_x, double tol, int max_iter) {
  ConditionReport rep;
  const ConeSpec& cone = rp.cone();
  if (all_orthant(cone)) {
    rep.verdict = Verdict::kHolds;
    rep.mode = VerdictMode::kExact;
    rep.witness = "polyhedral cone: H(x) is closed unconditionally";
    return rep;
  }
  rep.mode = VerdictMode::kSampled;
  const std::vector<VecE> perp = face_perp_basis(cone, f_at_x);
  if (perp.empty()) {
    rep.verdict = Verdict::kHolds;
    rep.witness = "F = C: both sides are {0}";
    return rep;
  }
  const Mat m = rp.dgbar(x);
  Mat cols(rp.problem().n, static_cast<int>(perp.size()));
  for (int j = 0; j < cols.cols(); ++j) cols.col(j) = m.transpose() * perp[j];
  const Mat v = range_basis(cols);  // orthonormal basis of M*[F^perp]
  const FaceDesc conj = conjugate_face(cone, f_at_x);
  const Mat mt = m.transpose().eval();

  for (int j = 0; j < v.cols(); ++j) {
    for (double sign : {1.0, -1.0}) {
      const Vec target = sign * v.col(j);
      DykstraResult dr = dykstra_affine_face(mt, target, cone, conj, /*polar=*/false,
                                             VecE::Zero(cone.dim()), tol, max_iter);
      const double res = (mt * dr.point - target).norm();
      if (!dr.converged || res > std::max(tol, 1e-7)) {
        rep.verdict = Verdict::kFails;
        rep.value = res;
        rep.witness = "M*[F_triangle] misses " + std::string(sign > 0 ? "+" : "-") +
                      "v_" + std::to_string(j + 1) +
                      " of M*[F_perp] (best residual " + std::to_string(res) + ")";
        return rep;
      }
    }
  }
  rep.verdict = Verdict::kHolds;
  rep.witness = "all +-v probes of M*[F_perp] reached within F_triangle";
  return rep;
}

namespace {

ConditionReport rank_constancy_over(const ReducedProblem& rp,
                                    const std::vector<FaceDesc>& faces, bool exact_enum,
                                    const ConditionReport& hrep, const CqParams& params) {
  ConditionReport rep;
  rep.mode = (exact_enum && hrep.mode == VerdictMode::kExact) ? VerdictMode::kExact
                                                              : VerdictMode::kSampled;
  if (hrep.verdict != Verdict::kHolds) {
    rep.verdict = hrep.verdict;
    rep.witness = "H(xbar) closedness: " + hrep.witness;
    return rep;
  }
  for (size_t i = 0; i < faces.size(); ++i) {
    RankConstancy rc = rank_constancy(rp, faces[i], params.eps, params.samples,
                                      derive_seed(params.seed, "rank-face", i),
                                      params.tol_rank);
    if (!rc.constant) {
      rep.verdict = Verdict::kFails;
      rep.witness_face = faces[i];
      rep.value = rc.rank;
      rep.witness = "face " + face_brief(rp.cone(), faces[i]) + ": rank " +
                    std::to_string(rc.rank) + " at xbar vs " +
                    std::to_string(rc.witness_rank) + " at a sampled point";
      return rep;
    }
    if (i == 0) rep.value = rc.rank;
  }
  rep.verdict = Verdict::kHolds;
  rep.witness = "rank constant over " + std::to_string(faces.size()) + " face(s), " +
                std::to_string(params.samples) + " samples each";
  return rep;
}

}  // namespace

ConditionReport crcq_check(const ReducedProblem& rp, const FirstOrderData& fod,
                           const CqParams& params) {
  ConditionReport hrep =
      h_closedness(rp, rp.xbar(), fod.f_jminus, params.tol_feas, params.max_iter);
  SubfaceEnum sf = subfaces(rp.cone(), full_face(rp.cone()), params.budget,
                            derive_seed(params.seed, "crcq"));
  return rank_constancy_over(rp, sf.faces, sf.exact, hrep, params);
}

ConditionReport crsc_check(const ReducedProblem& rp, const FirstOrderData& fod,
                           const CqParams& params) {
  ConditionReport hrep =
      h_closedness(rp, rp.xbar(), fod.f_jminus, params.tol_feas, params.max_iter);
  std::vector<FaceDesc> faces = {fod.f_jminus};
  // F_J- itself is a single concrete face; the verdict is exact up to the
  // closedness probe whenever the face was found by the exact loop.
  const bool exact_face = fod.gamma_exact && fod.gamma_converged;
  return rank_constancy_over(rp, faces, exact_face, hrep, params);
}

ConditionReport strong_crsc_check(const ReducedProblem& rp, const FirstOrderData& fod,
                                  const CqParams& params) {
  ConditionReport hrep =
      h_closedness(rp, rp.xbar(), fod.f_jminus, params.tol_feas, params.max_iter);
  SubfaceEnum sf = subfaces(rp.cone(), fod.f_jminus, params.budget,
                            derive_seed(params.seed, "strong-crsc"));
  const bool exact_enum = sf.exact && fod.gamma_exact && fod.gamma_converged;
  return rank_constancy_over(rp, sf.faces, exact_enum, hrep, params);
}

CqReport run_cq(const ReducedProblem& rp, const FirstOrderData& fod,
                const CqParams& params) {
  CqReport rep;
  rep.params = params;
  rep.h_closed = h_closedness(rp, rp.xbar(), fod.f_jminus, params.tol_feas,
                              params.max_iter);
  rep.robinson = robinson_check(rp, fod, params.tol_feas);
  rep.nondegeneracy = nondegeneracy_check(rp, params.tol_rank);
  rep.crcq = crcq_check(rp, fod, params);
  rep.crsc = crsc_check(rp, fod, params);
  rep.strong_crsc = strong_crsc_check(rp, fod, params);
  return rep;
}

std::vector<std::string> implication_audit(const CqReport& report) {
  std::vector<std::string> violations;
  struct Pair {
    const ConditionReport* a;
    const ConditionReport* b;
    const char* text;
  };
  const Pair pairs[] = {
      {&report.robinson, &report.crsc, "Robinson => CRSC"},
      {&report.crcq, &report.strong_crsc, "CRCQ => Strong-CRSC"},
      {&report.strong_crsc, &report.crsc, "Strong-CRSC => CRSC"},
      {&report.nondegeneracy, &report.robinson, "nondegeneracy => Robinson"},
  };
  for (const Pair& p : pairs) {
    if (p.a->verdict == Verdict::kHolds && p.b->verdict == Verdict::kFails &&
        p.a->mode == VerdictMode::kExact && p.b->mode == VerdictMode::kExact)
      violations.push_back(std::string("violated: ") + p.text);
  }
  return violations;
}

}  // namespace conecert
