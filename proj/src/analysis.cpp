// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conecert/errors.hpp"
#include "conecert/rng.hpp"

namespace conecert {

bool lin_cone_member(const ReducedProblem& rp, const Vec& d, double tol) {
  if (rp.cone().dim() == 0) return true;
  return contains(rp.cone(), rp.dgbar_base() * d, tol);
}

GammaResult minimal_face_gamma_m(const Mat& m, const ConeSpec& cone,
                                 const GammaParams& params) {
  GammaResult out;
  out.face = full_face(cone);
  out.exact = true;
  for (const BlockSpec& b : cone.blocks())
    if (b.kind != ConeKind::kOrthant) out.exact = false;

  const int max_cuts = params.max_cuts > 0 ? params.max_cuts : face_chain_bound(cone) + 1;
  for (int it = 0; it < max_cuts; ++it) {
    ExposingResult er =
        find_exposing_vector(m, cone, out.face, nullptr, params.tol, params.max_iter);
    if (!er.found) {
      out.converged = true;
      out.iterations = it;
      return out;
    }
    // Validate the certificate before cutting with it.
    const double polar_dist =
        (project_face_polar(cone, out.face, er.s) - er.s).norm();
    const double kernel_res = (m.transpose() * er.s).norm();
    if (polar_dist > 1e-8 || kernel_res > 1e-8 * (1.0 + er.s.norm())) {
      out.converged = false;  // invalid certificate; report the partial face
      out.iterations = it;
      return out;
    }
    FaceDesc next = face_cut(cone, out.face, er.s);
    if (face_equal(cone, next, out.face)) {
      out.converged = true;  // no strict progress left
      out.iterations = it;
      return out;
    }
    out.exposing.push_back(er.s);
    out.face = std::move(next);
  }
  out.converged = false;  // nontermination diagnostic
  out.iterations = max_cuts;
  return out;
}

GammaResult minimal_face_gamma(const ReducedProblem& rp, const GammaParams& params) {
  return minimal_face_gamma_m(rp.dgbar_base(), rp.cone(), params);
}

RiDirection ri_direction(const ReducedProblem& rp, const FaceDesc& f_jminus) {
  RiDirection out;
  const int n = rp.problem().n;
  if (face_is_zero(rp.cone(), f_jminus)) {
    // ri({0}) = {0}: the zero direction maps onto it vacuously.
    out.d = Vec::Zero(n);
    out.margin = std::numeric_limits<double>::infinity();
    out.certified = true;
    return out;
  }
  MarginResult mr = max_face_margin(rp.dgbar_base(), VecE::Zero(rp.cone().dim()),
                                    rp.cone(), f_jminus, 1.0);
  out.d = mr.feasible ? mr.z : Vec::Zero(n);
  out.margin = mr.feasible ? mr.margin : -std::numeric_limits<double>::infinity();
  out.certified = mr.feasible && out.margin > 0;
  return out;
}

FirstOrderData build_first_order(const ReducedProblem& rp, const GammaParams& params) {
  FirstOrderData fod;
  GammaResult gr = minimal_face_gamma(rp, params);
  fod.f_jminus = gr.face;
  fod.exposing = gr.exposing;
  fod.gamma_exact = gr.exact;
  fod.gamma_converged = gr.converged;
  fod.ri = ri_direction(rp, fod.f_jminus);
  return fod;
}

bool lin_equals_face_probe(const ReducedProblem& rp, const FaceDesc& f_jminus,
                           int samples, std::uint64_t seed, double tol) {
  const int n = rp.problem().n;
  if (rp.cone().dim() == 0) return true;
  Rng rng(seed, "lin-face-probe");
  const double scales[] = {1e-2, 1e-1, 1.0, 1e1, 1e2};
  for (int s = 0; s < samples; ++s) {
    const Vec d = scales[s % 5] * rng.unit_vec(n);
    const VecE img = rp.dgbar_base() * d;
    const bool lhs = contains(rp.cone(), img, tol);
    const bool rhs = face_contains(rp.cone(), f_jminus, img, tol);
    if (lhs != rhs) return false;
  }
  return true;
}

MultiplierSet solve_multipliers(const ReducedProblem& rp, const Vec& gradf,
                                double tol, int max_iter) {
  MultiplierSet ms;
  const Mat m = rp.dgbar_base();
  const int p = rp.cone().dim();
  const double scale = 1.0 + gradf.norm();
  if (p == 0) {
    ms.kernel = Mat(0, 0);
    if (gradf.norm() <= tol * scale) {
      ms.found = true;
      ms.y0 = Vec::Zero(0);
      ms.y0_lifted = VecE::Zero(rp.original_cone().dim());
      ms.residual = gradf.norm();
    } else {
      ms.infeasibility = gradf.norm();
    }
    return ms;
  }

  const Mat at = m.transpose().eval();  // the system DGbar* y = -gradf, n rows
  AffineProjector paff(at, Vec(-gradf));
  ms.kernel = null_space(at);
  if (!paff.consistent(tol * scale)) {
    ms.infeasibility = paff.lstsq_residual();
    return ms;
  }
  const FaceDesc cfull = full_face(rp.cone());
  DykstraResult dr = dykstra_affine_face(at, Vec(-gradf), rp.cone(), cfull,
                                         /*polar=*/true, VecE::Zero(p), tol, max_iter);
  const double res = (at * dr.point + gradf).norm();
  if (!dr.converged || res > tol * scale) {
    ms.infeasibility = std::max(res, dr.residual);
    return ms;
  }
  ms.found = true;
  ms.y0 = dr.point;
  ms.y0_lifted = lift_multiplier(rp.reduction(), ms.y0);
  ms.residual = res;
  return ms;
}

std::vector<Vec> sample_multipliers(const ReducedProblem& rp, const MultiplierSet& ms,
                                    const Vec& gradf, int count, std::uint64_t seed,
                                    double tol) {
  std::vector<Vec> out;
  if (!ms.found) return out;
  out.push_back(ms.y0);
  const int p = rp.cone().dim();
  if (p == 0 || ms.kernel.cols() == 0 || count <= 1) return out;

  const Mat at = rp.dgbar_base().transpose().eval();
  const FaceDesc cfull = full_face(rp.cone());
  const double scale = 1.0 + gradf.norm();
  const double cap = 1e3 * (1.0 + ms.y0.norm());
  Rng rng(seed, "multiplier-sampler");
  const double steps[] = {0.1, 1.0, 10.0};
  int tries = 0;
  while (static_cast<int>(out.size()) < count && tries < 20 * count) {
    ++tries;
    Vec y = ms.y0 + steps[tries % 3] * (ms.kernel * rng.normal_vec(
                                            static_cast<int>(ms.kernel.cols())));
    DykstraResult dr = dykstra_affine_face(at, Vec(-gradf), rp.cone(), cfull,
                                           /*polar=*/true, y, tol, 4000);
    const double res = (at * dr.point + gradf).norm();
    if (!dr.converged || res > tol * scale) continue;
    if (dr.point.norm() > cap) continue;
    if (!polar_contains(rp.cone(), dr.point, tol)) continue;
    out.push_back(dr.point);
  }
  return out;
}

bool critical_member(const ReducedProblem& rp, const Vec& gradf, const Vec& d,
                     double tol) {
  if (!lin_cone_member(rp, d, tol)) return false;
  return std::abs(gradf.dot(d)) <= tol * (1.0 + gradf.norm()) * d.norm();
}

std::vector<Vec> sample_critical_directions(const ReducedProblem& rp, const Vec& gradf,
                                            const FirstOrderData& fod, int count,
                                            std::uint64_t seed, double tol) {
  std::vector<Vec> out;
  const int n = rp.problem().n;
  const double gn2 = gradf.squaredNorm();
  auto project_crit = [&](const Vec& d) {
    return gn2 > 0 ? Vec(d - gradf * (gradf.dot(d) / gn2)) : d;
  };

  const Vec dri = project_crit(fod.ri.d);
  if (dri.norm() > 1e-10 && critical_member(rp, gradf, Vec(dri / dri.norm()), tol))
    out.push_back(dri / dri.norm());

  Rng rng(seed, "critical-dirs");
  int tries = 0;
  while (static_cast<int>(out.size()) < count && tries < 60 * count) {
    ++tries;
    Vec d = project_crit(rng.unit_vec(n));
    if (d.norm() < 1e-10) continue;
    d /= d.norm();
    if (critical_member(rp, gradf, d, tol)) out.push_back(d);
  }
  return out;
}

}  // namespace conecert
