// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/report.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conecert/rng.hpp"

namespace conecert {

namespace {

Json json_num(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? Json("inf") : Json("-inf");
}

Json condition_json(const ConditionReport& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["mode"] = to_string(c.mode);
  j["witness"] = c.witness;
  j["value"] = json_num(c.value);
  return j;
}

std::string reduction_block_brief(const ConeSpec& orig, int i,
                                  const ReductionMap::Block& blk) {
  std::string s = to_string(orig.block(i));
  switch (blk.kind) {
    case ReductionMap::Block::Kind::kDropped:
      return s + " -> dropped (inactive)";
    case ReductionMap::Block::Kind::kSelect:
      return s + " -> orthant(" + std::to_string(blk.selected.size()) +
             ") [active selection]";
    case ReductionMap::Block::Kind::kIdentity:
      return s + " -> identity";
    case ReductionMap::Block::Kind::kSocBoundary:
      return s + " -> orthant(1) [boundary margin]";
    case ReductionMap::Block::Kind::kPsdReduce:
      return s + " -> psd(" + std::to_string(orig.block(i).size - blk.rank) +
             ") [kernel congruence]";
  }
  return s;
}

}  // namespace

AnalyzeResult analyze(const ProblemDef& p, const Vec& x, const AnalyzeOptions& opt) {
  AnalyzeResult r;
  r.options = opt;
  r.rp = std::make_shared<ReducedProblem>(p, x, opt.cq.tol_feas);
  const ReducedProblem& rp = *r.rp;

  GammaParams gp;
  gp.max_iter = opt.cq.max_iter;
  r.fod = build_first_order(rp, gp);
  r.cq = run_cq(rp, r.fod, opt.cq);

  const Vec gradf = rp.base().gradf;
  r.mset = solve_multipliers(rp, gradf, opt.cq.tol_feas, 5000);
  if (r.mset.found)
    r.multipliers = sample_multipliers(rp, r.mset, gradf, opt.multiplier_count,
                                       derive_seed(opt.cq.seed, "mult"), opt.cq.tol_feas);

  r.directions = sample_critical_directions(rp, gradf, r.fod, opt.direction_count,
                                            derive_seed(opt.cq.seed, "dirs"),
                                            opt.cq.tol_feas);
  r.ssoc = ssoc_check(rp, r.multipliers, r.directions, opt.so_tol);

  const bool strong_ok = r.cq.strong_crsc.verdict == Verdict::kHolds;
  if (strong_ok) {
    r.invariance = invariance_check(rp, r.multipliers, r.directions, opt.so_tol,
                                    /*strong_crsc_holds=*/true, "critical");
  } else {
    // Kernel-only fallback: constancy along the zero face still pins the
    // second-order term on Ker DGbar.
    RankConstancy zero_rc =
        rank_constancy(rp, zero_face(rp.cone()), opt.cq.eps, opt.cq.samples,
                       derive_seed(opt.cq.seed, "zero-face"), opt.cq.tol_rank);
    if (zero_rc.constant) {
      std::vector<Vec> kdirs;
      const Mat kernel = null_space(rp.dgbar_base());
      for (int c = 0; c < kernel.cols(); ++c) kdirs.push_back(kernel.col(c));
      r.invariance = invariance_check(rp, r.multipliers, kdirs, opt.so_tol,
                                      /*strong_crsc_holds=*/false, "kernel");
      r.invariance.supported = true;  // supported by the zero-face certificate
    } else {
      r.invariance = invariance_check(rp, r.multipliers, r.directions, opt.so_tol,
                                      /*strong_crsc_holds=*/false, "critical");
    }
  }

  FrParams fp;
  fp.eps = opt.cq.eps;
  fp.samples = opt.fr_samples;
  fp.seed = opt.cq.seed;
  fp.tol = opt.cq.tol_feas;
  fp.max_iter = opt.cq.max_iter;
  fp.crsc_holds = r.cq.crsc.verdict == Verdict::kHolds;
  r.fr = nonlinear_facial_reduction(rp, r.fod, fp);

  r.violations = implication_audit(r.cq);
  return r;
}

Json report_to_json(const AnalyzeResult& r) {
  const ReducedProblem& rp = *r.rp;
  Json j;
  j["problem"] = rp.problem().name;
  Json pt = Json::array();
  for (int i = 0; i < rp.xbar().size(); ++i) pt.push_back(rp.xbar()[i]);
  j["point"] = pt;

  Json params;
  params["eps"] = r.options.cq.eps;
  params["samples"] = r.options.cq.samples;
  params["budget"] = r.options.cq.budget;
  params["seed"] = r.options.cq.seed;
  params["tol_rank"] = r.options.cq.tol_rank;
  params["tol_feas"] = r.options.cq.tol_feas;
  j["params"] = params;

  Json red;
  Json blocks = Json::array();
  const ReductionMap& rm = rp.reduction();
  for (int i = 0; i < rm.original_cone().num_blocks(); ++i)
    blocks.push_back(reduction_block_brief(rm.original_cone(), i, rm.blocks()[i]));
  red["blocks"] = blocks;
  red["rho"] = json_num(rm.rho());
  j["reduction"] = red;

  Json faces;
  faces["F_Jminus"] = face_to_json(rp.cone(), r.fod.f_jminus);
  faces["dim"] = face_dim(rp.cone(), r.fod.f_jminus);
  faces["ri_margin"] = json_num(r.fod.ri.margin);
  j["faces"] = faces;

  Json verdicts;
  verdicts["robinson"] = condition_json(r.cq.robinson);
  verdicts["ndg"] = condition_json(r.cq.nondegeneracy);
  verdicts["crcq"] = condition_json(r.cq.crcq);
  verdicts["crsc"] = condition_json(r.cq.crsc);
  verdicts["strong_crsc"] = condition_json(r.cq.strong_crsc);
  verdicts["h_closed"] = condition_json(r.cq.h_closed);
  j["verdicts"] = verdicts;

  Json mult;
  mult["found"] = r.mset.found;
  mult["count"] = static_cast<int>(r.multipliers.size());
  mult["residual"] = json_num(r.mset.found ? r.mset.residual : r.mset.infeasibility);
  j["multipliers"] = mult;

  Json so;
  so["directions"] = static_cast<int>(r.directions.size());
  so["min_value"] = json_num(r.ssoc.applicable ? r.ssoc.min_value : 0.0);
  so["ssoc"] = r.ssoc.applicable ? to_string(r.ssoc.verdict) : "not-applicable";
  so["invariance_spread"] = json_num(r.invariance.max_spread);
  so["invariance"] = to_string(r.invariance.verdict);
  so["invariance_scope"] = r.invariance.scope;
  j["second_order"] = so;

  Json fr;
  fr["emitted"] = r.fr.emitted;
  if (!r.fr.emitted) fr["refusal"] = r.fr.refusal;
  Json chain = Json::array();
  for (const VecE& s : r.fr.chain) {
    Json v = Json::array();
    for (int i = 0; i < s.size(); ++i) v.push_back(s[i]);
    chain.push_back(v);
  }
  fr["chain"] = chain;
  j["facial_reduction"] = fr;

  Json viol = Json::array();
  for (const std::string& v : r.violations) viol.push_back(v);
  j["implication_violations"] = viol;
  return j;
}

std::string report_to_text(const AnalyzeResult& r) {
  const ReducedProblem& rp = *r.rp;
  std::ostringstream os;
  os << "problem: " << rp.problem().name << "\n";
  os << "point:";
  for (int i = 0; i < rp.xbar().size(); ++i) os << " " << rp.xbar()[i];
  os << "\n";
  const ReductionMap& rm = rp.reduction();
  os << "reduction (rho = " << rm.rho() << "):\n";
  for (int i = 0; i < rm.original_cone().num_blocks(); ++i)
    os << "  " << reduction_block_brief(rm.original_cone(), i, rm.blocks()[i]) << "\n";
  os << "F_Jminus: dim " << face_dim(rp.cone(), r.fod.f_jminus) << " of "
     << rp.cone().dim() << ", ri margin " << r.fod.ri.margin << "\n";
  auto line = [&os](const char* name, const ConditionReport& c) {
    os << "  " << name << ": " << to_string(c.verdict) << " (" << to_string(c.mode)
       << ") - " << c.witness << "\n";
  };
  os << "verdicts:\n";
  line("robinson   ", r.cq.robinson);
  line("ndg        ", r.cq.nondegeneracy);
  line("crcq       ", r.cq.crcq);
  line("crsc       ", r.cq.crsc);
  line("strong_crsc", r.cq.strong_crsc);
  line("h_closed   ", r.cq.h_closed);
  os << "multipliers: " << (r.mset.found ? "found" : "infeasible") << ", count "
     << r.multipliers.size() << ", residual "
     << (r.mset.found ? r.mset.residual : r.mset.infeasibility) << "\n";
  os << "second order: dirs " << r.directions.size() << ", ssoc "
     << (r.ssoc.applicable ? to_string(r.ssoc.verdict) : "not-applicable")
     << ", min value " << r.ssoc.min_value << ", invariance "
     << to_string(r.invariance.verdict) << " [" << r.invariance.scope << "], spread "
     << r.invariance.max_spread << "\n";
  os << "facial reduction: " << (r.fr.emitted ? "emitted" : "refused: " + r.fr.refusal)
     << ", chain length " << r.fr.chain.size() << "\n";
  for (const std::string& v : r.violations) os << "INTERNAL INCONSISTENCY: " << v << "\n";
  return os.str();
}

}  // namespace conecert
