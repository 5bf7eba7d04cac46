// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/facered.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <sstream>

#include "conecert/errors.hpp"
#include "conecert/rng.hpp"

namespace conecert {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Coordinate expressions of a map into a cone's flat layout. PSD blocks keep
// the symmetric matrix of entries as well, for posing face blocks.
struct CoordExprs {
  std::vector<Expr> flat;                      // svec coordinates for psd
  std::vector<std::vector<Expr>> psd_entries;  // per block: k*k row-major or empty
};

Expr affine_expr(const Vec& coef, double constant, int n) {
  Expr e = Expr::constant(constant);
  bool started = std::abs(constant) > 1e-14;
  if (!started) e = Expr::constant(0.0);
  for (int c = 0; c < n; ++c) {
    if (std::abs(coef[c]) < 1e-14) continue;
    const Expr term = Expr::constant(coef[c]) * Expr::variable(c);
    e = started ? e + term : term;
    started = true;
  }
  return e;
}

CoordExprs affine_coords(const Mat& a, const VecE& b, const ConeSpec& cone, int n) {
  CoordExprs out;
  out.flat.reserve(cone.dim());
  for (int j = 0; j < cone.dim(); ++j)
    out.flat.push_back(affine_expr(a.row(j).transpose(), b[j], n));
  out.psd_entries.resize(cone.num_blocks());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& spec = cone.block(i);
    if (spec.kind != ConeKind::kPsd) continue;
    const int k = spec.size;
    const Mat m0 = smat(cone.block_of(b, i));
    std::vector<Mat> mc(n);
    for (int c = 0; c < n; ++c) mc[c] = smat(cone.block_of(Vec(a.col(c)), i));
    for (int r = 0; r < k; ++r)
      for (int cc = 0; cc < k; ++cc) {
        Vec coef(n);
        for (int c = 0; c < n; ++c) coef[c] = mc[c](r, cc);
        out.psd_entries[i].push_back(affine_expr(coef, m0(r, cc), n));
      }
  }
  return out;
}

Expr weighted_sum(const std::vector<Expr>& exprs, const Vec& w) {
  Expr e = Expr::constant(0.0);
  bool started = false;
  for (int l = 0; l < w.size(); ++l) {
    if (std::abs(w[l]) < 1e-14) continue;
    Expr term = std::abs(w[l] - 1.0) < 1e-15 ? exprs[l]
                                             : Expr::constant(w[l]) * exprs[l];
    e = started ? e + term : term;
    started = true;
  }
  return e;
}

// Sum_ab W_ai W_bj M_ab for the (i,j) entry of W' M W.
Expr congruence_entry(const std::vector<Expr>& entries, const Mat& w, int k, int i,
                      int j) {
  Vec coef(k * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) coef[a * k + b] = w(a, i) * w(b, j);
  // symmetrize the coefficient on (a,b)/(b,a) so the entry uses (M+M')/2
  Vec sym = coef;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      sym[a * k + b] = 0.5 * (coef[a * k + b] + coef[b * k + a]);
  return weighted_sum(entries, sym);
}

// Rewrites "coords in face" as equality rows over F^perp (collapsed to rows
// with independent pivot columns) plus solid face blocks.
ProblemDef emit_over_face(const std::string& name, int n, const Expr& objective,
                          const ConeSpec& cone, const CoordExprs& coords,
                          const FaceDesc& face, const Mat& pivot_data,
                          double tol_rank) {
  ProblemDef out;
  out.name = name;
  out.n = n;
  out.objective = objective;

  const std::vector<VecE> perp = face_perp_basis(cone, face);
  if (!perp.empty()) {
    Eigen::ColPivHouseholderQR<Mat> qr(pivot_data);
    qr.setThreshold(tol_rank);
    const int rank = static_cast<int>(qr.rank());
    std::vector<int> keep;
    for (int i = 0; i < rank; ++i) keep.push_back(qr.colsPermutation().indices()[i]);
    std::sort(keep.begin(), keep.end());
    if (rank == 0) keep.push_back(0);  // degenerate: keep one row as written
    for (int idx : keep) out.equalities.push_back(weighted_sum(coords.flat, perp[idx]));
  }

  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& spec = cone.block(i);
    const BlockFace& bf = face.blocks[i];
    const int off = cone.block_offset(i);
    switch (spec.kind) {
      case ConeKind::kOrthant: {
        std::vector<Expr> kept;
        for (int j = 0; j < spec.size; ++j)
          if (!std::binary_search(bf.zero_set.begin(), bf.zero_set.end(), j))
            kept.push_back(coords.flat[off + j]);
        if (!kept.empty())
          out.blocks.push_back(
              {orthant_block(static_cast<int>(kept.size())), std::move(kept)});
        break;
      }
      case ConeKind::kSecondOrder: {
        if (bf.soc_tag == SocFaceTag::kFull) {
          std::vector<Expr> all(coords.flat.begin() + off,
                                coords.flat.begin() + off + spec.size);
          out.blocks.push_back({soc_block(spec.size), std::move(all)});
        } else if (bf.soc_tag == SocFaceTag::kRay) {
          Vec w(spec.size);
          w[0] = 1.0 / kSqrt2;
          w.tail(spec.size - 1) = bf.ray_tail / kSqrt2;
          std::vector<Expr> ray = {weighted_sum(
              std::vector<Expr>(coords.flat.begin() + off,
                                coords.flat.begin() + off + spec.size),
              w)};
          out.blocks.push_back({orthant_block(1), std::move(ray)});
        }
        break;
      }
      case ConeKind::kPsd: {
        const Mat& w = bf.psd_basis;
        const int rho = static_cast<int>(w.cols());
        if (rho == 0) break;
        std::vector<Expr> entries;
        for (int r = 0; r < rho; ++r)
          for (int c = 0; c < rho; ++c)
            entries.push_back(
                congruence_entry(coords.psd_entries[i], w, spec.size, r, c));
        out.blocks.push_back({psd_block(rho), std::move(entries)});
        break;
      }
    }
  }
  return out;
}

}  // namespace

FacialReductionResult linear_facial_reduction(const Mat& a, const VecE& b,
                                              const ConeSpec& k, double tol) {
  FacialReductionResult out;
  out.face = full_face(k);
  const int bound = face_chain_bound(k);
  for (int it = 0; it <= bound; ++it) {
    ExposingResult er = find_exposing_vector(a, k, out.face, &b, tol, 20000);
    if (!er.found) break;
    const double polar_dist = (project_face_polar(k, out.face, er.s) - er.s).norm();
    if (polar_dist > 1e-8 || std::abs(b.dot(er.s)) > 1e-8 * (1.0 + b.norm())) break;
    FaceDesc next = face_cut(k, out.face, er.s);
    if (face_equal(k, next, out.face)) break;
    out.chain.push_back(er.s);
    out.face = std::move(next);
  }
  out.chain_bound_ok = static_cast<int>(out.chain.size()) <= bound;

  MarginResult slater = max_face_margin(a, b, k, out.face, 10.0 * (1.0 + b.norm()));
  out.slater_point = slater.feasible ? slater.z : Vec::Zero(a.cols());
  out.slater_margin = slater.feasible ? slater.margin
                                      : -std::numeric_limits<double>::infinity();

  const int n = static_cast<int>(a.cols());
  const CoordExprs coords = affine_coords(a, b, k, n);
  const std::vector<VecE> perp = face_perp_basis(k, out.face);
  Mat pivot(n + 1, static_cast<int>(perp.size()));
  for (int j = 0; j < pivot.cols(); ++j) {
    pivot.col(j).head(n) = a.transpose() * perp[j];
    pivot(n, j) = b.dot(perp[j]);
  }
  out.reduced_problem = emit_over_face("facially-reduced", n, Expr::constant(0.0), k,
                                       coords, out.face, pivot, 1e-10);
  out.reduced_problem.face = FaceAnnotation{k, out.face};
  out.emitted = true;
  return out;
}

namespace {

// Coordinate expressions of Gbar = Xi o G per reduced block. Partially
// active psd blocks use the fixed kernel basis E(abar) in place of the
// smooth E(A); the emitted file agrees with the true reduction to first
// order and the audit note records the substitution.
CoordExprs gbar_coords(const ReducedProblem& rp, std::string* note) {
  const ReductionMap& rm = rp.reduction();
  const ConeSpec& orig = rm.original_cone();
  const ConeSpec& red = rm.reduced_cone();
  CoordExprs out;
  out.flat.resize(red.dim());
  out.psd_entries.resize(red.num_blocks());

  for (int i = 0; i < orig.num_blocks(); ++i) {
    const ReductionMap::Block& blk = rm.blocks()[i];
    if (blk.reduced_block < 0) continue;
    const std::vector<Expr>& src = rp.problem().blocks[i].entries;
    const int roff = red.block_offset(blk.reduced_block);
    switch (blk.kind) {
      case ReductionMap::Block::Kind::kSelect:
        for (size_t j = 0; j < blk.selected.size(); ++j)
          out.flat[roff + j] = src[blk.selected[j]];
        break;
      case ReductionMap::Block::Kind::kIdentity: {
        if (orig.block(i).kind != ConeKind::kPsd) {
          for (int j = 0; j < orig.block(i).size; ++j) out.flat[roff + j] = src[j];
          break;
        }
        const int k = orig.block(i).size;
        std::vector<Expr> sym(static_cast<size_t>(k) * k);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c)
            sym[r * k + c] = (src[r * k + c] + src[c * k + r]) * Expr::constant(0.5);
        int idx = 0;
        for (int c = 0; c < k; ++c)
          for (int r = c; r < k; ++r, ++idx)
            out.flat[roff + idx] = (r == c)
                                       ? sym[r * k + c]
                                       : Expr::constant(kSqrt2) * sym[r * k + c];
        out.psd_entries[blk.reduced_block] = std::move(sym);
        break;
      }
      case ReductionMap::Block::Kind::kSocBoundary: {
        const int m = orig.block(i).size;
        Expr sq = src[1] * src[1];
        for (int j = 2; j < m; ++j) sq = sq + src[j] * src[j];
        out.flat[roff] = src[0] - Expr::sqrt(sq);
        break;
      }
      case ReductionMap::Block::Kind::kPsdReduce: {
        const int k = orig.block(i).size;
        const int kr = k - blk.rank;
        const Mat& e0 = blk.kernel_basis;  // k x kr
        if (note && !note->empty()) *note += "; ";
        if (note)
          *note += "psd block " + std::to_string(i + 1) +
                   " emitted with the fixed kernel basis E(Gbar base)";
        std::vector<Expr> red_entries(static_cast<size_t>(kr) * kr);
        for (int r = 0; r < kr; ++r)
          for (int c = 0; c < kr; ++c) {
            Vec coef(k * k);
            for (int a2 = 0; a2 < k; ++a2)
              for (int b2 = 0; b2 < k; ++b2)
                coef[a2 * k + b2] = 0.5 * (e0(a2, r) * e0(b2, c) + e0(b2, r) * e0(a2, c));
            red_entries[r * kr + c] = weighted_sum(src, coef);
          }
        int idx = 0;
        for (int c = 0; c < kr; ++c)
          for (int r = c; r < kr; ++r, ++idx)
            out.flat[roff + idx] = (r == c) ? red_entries[r * kr + c]
                                            : Expr::constant(kSqrt2) *
                                                  red_entries[r * kr + c];
        out.psd_entries[blk.reduced_block] = std::move(red_entries);
        break;
      }
      case ReductionMap::Block::Kind::kDropped:
        break;
    }
  }
  return out;
}

Vec contract_into_radius(const ReducedProblem& rp, const Vec& x0) {
  Vec x = x0;
  for (int shrink = 0; shrink < 40; ++shrink) {
    try {
      rp.reduction().check_radius(eval_G(rp.problem(), x));
      return x;
    } catch (const RadiusError&) {
      x = rp.xbar() + 0.5 * (x - rp.xbar());
    }
  }
  return rp.xbar();
}

}  // namespace

FacialReductionResult nonlinear_facial_reduction(const ReducedProblem& rp,
                                                 const FirstOrderData& fod,
                                                 const FrParams& params) {
  FacialReductionResult out;
  out.face = fod.f_jminus;
  out.chain = fod.exposing;
  out.chain_bound_ok =
      static_cast<int>(out.chain.size()) <= face_chain_bound(rp.cone());
  out.audit.samples = params.samples;
  if (!params.crsc_holds) {
    out.refusal = "precondition: CRSC was not established at xbar";
    return out;
  }

  // A3 on F_J- (structural for orthant/soc/psd blocks; verified by sampling).
  if (!a3_check(rp.cone(), fod.f_jminus, params.tol,
                derive_seed(params.seed, "a3"))) {
    out.audit.a3 = false;
    out.refusal = "A3 failed: (F_triangle)^perp n C != F on sampled points";
    return out;
  }

  const double radius = params.eps * (1.0 + rp.xbar().norm());
  GammaParams gp;
  gp.max_iter = params.max_iter;
  const auto points =
      halton_ball(rp.xbar(), radius, params.samples, derive_seed(params.seed, "fr"));
  for (const Vec& x0 : points) {
    const Vec x = contract_into_radius(rp, x0);
    GammaResult gx = minimal_face_gamma_m(rp.dgbar(x), rp.cone(), gp);
    if (!gx.converged || !face_equal(rp.cone(), gx.face, fod.f_jminus)) {
      out.audit.a2 = false;
      out.audit.witness_x = x;
      std::ostringstream os;
      os << "A2 failed: F_min(Gamma) changes at a sampled point near xbar";
      out.refusal = os.str();
      return out;
    }
    ConditionReport h = h_closedness(rp, x, gx.face, params.tol, params.max_iter);
    if (h.verdict != Verdict::kHolds) {
      out.audit.a1 = false;
      out.audit.witness_x = x;
      out.refusal = "A1 failed: H(x) not closed at a sampled point (" + h.witness + ")";
      return out;
    }
  }

  CoordExprs coords = gbar_coords(rp, &out.audit.note);
  const std::vector<VecE> perp = face_perp_basis(rp.cone(), fod.f_jminus);
  Mat pivot(rp.problem().n, static_cast<int>(perp.size()));
  for (int j = 0; j < pivot.cols(); ++j)
    pivot.col(j) = rp.dgbar_base().transpose() * perp[j];
  out.reduced_problem =
      emit_over_face(rp.problem().name + "-fred", rp.problem().n,
                     rp.problem().objective, rp.cone(), coords, fod.f_jminus, pivot,
                     1e-8);
  out.reduced_problem.face = FaceAnnotation{rp.cone(), fod.f_jminus};
  out.slater_margin = fod.ri.margin;
  out.emitted = true;
  return out;
}

EquivalenceProbe local_equivalence_probe(const ReducedProblem& rp, const FaceDesc& f,
                                         double radius, int samples,
                                         std::uint64_t seed, double tol) {
  EquivalenceProbe out;
  out.samples = samples;
  for (const Vec& x0 : halton_ball(rp.xbar(), radius, samples, seed)) {
    const Vec x = contract_into_radius(rp, x0);
    const VecE gb = rp.gbar(x);
    const bool lhs = rp.cone().dim() == 0 || contains(rp.cone(), gb, tol);
    const bool rhs = rp.cone().dim() == 0 || face_contains(rp.cone(), f, gb, tol);
    if (lhs != rhs) {
      out.verdict = Verdict::kFails;
      out.witness_x = x;
      out.cone_residual = interior_margin(rp.cone(), gb);
      VecE in_span = VecE::Zero(rp.cone().dim());
      for (const VecE& b : face_span_basis(rp.cone(), f)) in_span += b.dot(gb) * b;
      out.face_residual = (gb - in_span).norm();
      return out;
    }
  }
  out.verdict = Verdict::kHolds;
  return out;
}

ReducedRobinson reduced_robinson_verify(const ProblemDef& emitted, const Vec& xbar,
                                        double tol) {
  ReducedRobinson out;
  const Mat jeq = jac_equalities(emitted, xbar);
  out.eq_rows = static_cast<int>(jeq.rows());
  out.eq_rank = numeric_rank(jeq);
  if (out.eq_rank != out.eq_rows) return out;  // dependent equality rows

  const ConeSpec kprime = emitted.cone();
  if (kprime.dim() == 0) {
    out.margin = std::numeric_limits<double>::infinity();
    out.verdict = Verdict::kHolds;
    return out;
  }
  const Mat nbasis =
      out.eq_rows > 0 ? null_space(jeq) : Mat::Identity(emitted.n, emitted.n);
  const VecE g0 = eval_G(emitted, xbar);
  MarginResult mr = max_face_margin(Mat(jac_G(emitted, xbar) * nbasis), g0, kprime,
                                    full_face(kprime), 1.0);
  out.margin = mr.feasible ? mr.margin : -std::numeric_limits<double>::infinity();
  out.verdict = out.margin > tol ? Verdict::kHolds : Verdict::kFails;
  return out;
}

bool problem_is_affine(const ProblemDef& p, const Vec& probe_x) {
  std::vector<Vec> dirs;
  for (int c = 0; c < p.n; ++c) {
    Vec e = Vec::Zero(p.n);
    e[c] = 1.0;
    dirs.push_back(e);
  }
  if (p.n > 0) dirs.push_back(Vec::Ones(p.n));
  for (const Vec& d : dirs)
    if (hess_G_dir(p, probe_x, d).norm() > 1e-12) return false;
  return true;
}

}  // namespace conecert
