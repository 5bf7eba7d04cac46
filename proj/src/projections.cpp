// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/projections.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "conecert/errors.hpp"
#include "conecert/lp.hpp"

namespace conecert {

namespace {

bool all_orthant(const ConeSpec& cone) {
  for (const BlockSpec& b : cone.blocks())
    if (b.kind != ConeKind::kOrthant) return false;
  return true;
}

Mat pseudo_inverse(const Mat& a, double tol_rank = 1e-10) {
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  Vec inv = Vec::Zero(s.size());
  for (int i = 0; i < s.size(); ++i)
    if (smax > 0 && s[i] > tol_rank * smax) inv[i] = 1.0 / s[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

AffineProjector::AffineProjector(const Mat& a, const Vec& b) : a_(a), b_(b) {
  pinv_ = pseudo_inverse(a);
  lstsq_residual_ = (a_ * (pinv_ * b_) - b_).norm();
}

VecE AffineProjector::operator()(const VecE& x) const {
  return x - pinv_ * (a_ * x - b_);
}

DykstraResult dykstra_affine_face(const Mat& a, const Vec& b, const ConeSpec& cone,
                                  const FaceDesc& face, bool polar, const VecE& start,
                                  double tol, int max_iter) {
  AffineProjector paff(a, b);
  auto pcone = [&](const VecE& x) {
    return polar ? project_face_polar(cone, face, x) : project_face(cone, face, x);
  };

  DykstraResult out;
  VecE x = start, p = VecE::Zero(start.size()), q = VecE::Zero(start.size());
  VecE y = x;
  double window_res = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_iter; ++k) {
    y = pcone(x + p);
    p = x + p - y;
    VecE xn = paff(y + q);
    q = y + q - xn;
    x = xn;
    out.residual = (y - x).norm();
    out.iterations = k + 1;
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
    if ((k + 1) % 250 == 0) {  // plateau: empty-intersection certificate
      if (window_res - out.residual < 1e-12 * (1.0 + out.residual)) break;
      window_res = out.residual;
    }
  }
  out.point = y;
  return out;
}

namespace {

// Exact LP path: cone is a product of orthant blocks, so F_polar n Ker(M*)
// reduces to sign-constrained linear feasibility. Maximizes the total
// strict negativity over the face's free coordinates within the unit box.
ExposingResult exposing_lp(const Mat& m, const ConeSpec& cone, const FaceDesc& face,
                           const VecE* b_orth, double tol) {
  const int p = cone.dim();
  std::vector<bool> in_zero(p, false);
  for (int i = 0; i < cone.num_blocks(); ++i)
    for (int j : face.blocks[i].zero_set) in_zero[cone.block_offset(i) + j] = true;

  // Variables: a_j in [0,1] with S_j = -a_j on free coordinates,
  // S_j = u_j - v_j on zero-set coordinates (boxed at kBig).
  const double kBig = 1e6;
  std::vector<int> free_idx, zero_idx;
  for (int j = 0; j < p; ++j) (in_zero[j] ? zero_idx : free_idx).push_back(j);
  const int nf = static_cast<int>(free_idx.size());
  const int nz = static_cast<int>(zero_idx.size());
  // columns: a (nf) | u (nz) | v (nz) | slack_a (nf) | slack_u (nz) | slack_v (nz)
  const int ncols = nf + 2 * nz + nf + 2 * nz;
  const int neq = static_cast<int>(m.cols()) + (b_orth ? 1 : 0);
  const int nrows = neq + nf + 2 * nz;
  Mat a = Mat::Zero(nrows, ncols);
  Vec rhs = Vec::Zero(nrows);
  Vec cost = Vec::Zero(ncols);

  auto scol = [&](int j, int row, double coef, Mat& am) {
    // S_j's contribution to constraint row with coefficient coef
    auto itf = std::lower_bound(free_idx.begin(), free_idx.end(), j);
    if (itf != free_idx.end() && *itf == j) {
      am(row, static_cast<int>(itf - free_idx.begin())) -= coef;  // S_j = -a_j
    } else {
      auto itz = std::lower_bound(zero_idx.begin(), zero_idx.end(), j);
      const int zj = static_cast<int>(itz - zero_idx.begin());
      am(row, nf + zj) += coef;       // +u_j
      am(row, nf + nz + zj) -= coef;  // -v_j
    }
  };

  int row = 0;
  for (int c = 0; c < m.cols(); ++c, ++row)  // M^T S = 0
    for (int j = 0; j < p; ++j)
      if (m(j, c) != 0.0) scol(j, row, m(j, c), a);
  if (b_orth) {
    for (int j = 0; j < p; ++j)
      if ((*b_orth)[j] != 0.0) scol(j, row, (*b_orth)[j], a);
    ++row;
  }
  for (int i = 0; i < nf; ++i, ++row) {  // a_i + slack = 1
    a(row, i) = 1.0;
    a(row, nf + 2 * nz + i) = 1.0;
    rhs[row] = 1.0;
  }
  for (int i = 0; i < 2 * nz; ++i, ++row) {  // u,v boxes
    a(row, nf + i) = 1.0;
    a(row, nf + 2 * nz + nf + i) = 1.0;
    rhs[row] = kBig;
  }
  for (int i = 0; i < nf; ++i) cost[i] = -1.0;  // max sum a

  LpResult lp = solve_lp(a, rhs, cost);
  ExposingResult out;
  if (lp.status != LpResult::Status::kOptimal || -lp.objective <= tol) return out;
  VecE s = VecE::Zero(p);
  for (int i = 0; i < nf; ++i) s[free_idx[i]] = -lp.x[i];
  for (int i = 0; i < nz; ++i) s[zero_idx[i]] = lp.x[nf + i] - lp.x[nf + nz + i];
  out.found = true;
  out.s = s / s.norm();
  out.residual = (m.transpose() * out.s).norm();
  return out;
}

}  // namespace

ExposingResult find_exposing_vector(const Mat& m, const ConeSpec& cone,
                                    const FaceDesc& face, const VecE* b_orth,
                                    double tol, int max_iter) {
  ExposingResult out;
  if (face_is_zero(cone, face)) return out;  // nothing left to expose
  if (all_orthant(cone)) return exposing_lp(m, cone, face, b_orth, tol);

  const VecE c_ri = face_ri_point(cone, face);
  const VecE c_hat = c_ri / c_ri.norm();
  const int extra = b_orth ? 2 : 1;
  Mat a(static_cast<int>(m.cols()) + extra, cone.dim());
  Vec b = Vec::Zero(a.rows());
  a.topRows(m.cols()) = m.transpose();
  a.row(m.cols()) = c_hat.transpose();
  b[m.cols()] = -1.0;  // strict-negativity probe
  if (b_orth) a.row(m.cols() + 1) = b_orth->transpose();

  AffineProjector paff(a, b);
  if (!paff.consistent(1e-9)) return out;

  DykstraResult dr =
      dykstra_affine_face(a, b, cone, face, /*polar=*/true, -c_hat, tol, max_iter);
  if (!dr.converged) return out;
  const VecE& s = dr.point;  // exactly in F_polar
  const double aff_res = (m.transpose() * s).norm() / (1.0 + s.norm());
  if (aff_res > 1e-9 || c_hat.dot(s) > -0.5) return out;
  out.found = true;
  out.s = s / s.norm();
  out.residual = aff_res;
  return out;
}

namespace {

MarginResult margin_lp(const Mat& m, const VecE& q, const ConeSpec& cone,
                       const FaceDesc& face, double radius) {
  const int n = static_cast<int>(m.cols());
  const int p = cone.dim();
  std::vector<bool> in_zero(p, false);
  for (int i = 0; i < cone.num_blocks(); ++i)
    for (int j : face.blocks[i].zero_set) in_zero[cone.block_offset(i) + j] = true;

  // Variables: z = zp - zm (each in [0, 2*radius] after shift z+radius... use
  // split with boxes), t = tp - tm, slacks for the margin rows and boxes.
  const double tbig = 1e6;
  int nfree = 0;
  for (int j = 0; j < p; ++j)
    if (!in_zero[j]) ++nfree;
  // columns: zp(n) zm(n) tp tm s_margin(nfree) s_zbox(2n) s_tbox(2)
  const int ncols = 2 * n + 2 + nfree + 2 * n + 2;
  const int nrows = p + 2 * n + 2;
  Mat a = Mat::Zero(nrows, ncols);
  Vec rhs = Vec::Zero(nrows);
  Vec cost = Vec::Zero(ncols);

  int srow = 0, scol = 2 * n + 2;
  for (int j = 0; j < p; ++j, ++srow) {
    for (int c = 0; c < n; ++c) {
      a(srow, c) = m(j, c);
      a(srow, n + c) = -m(j, c);
    }
    rhs[srow] = -q[j];
    if (in_zero[j]) continue;  // equality row <(Mz+q)_j> = 0
    a(srow, 2 * n) = -1.0;     // ... - t - slack = 0  => (Mz+q)_j >= t
    a(srow, 2 * n + 1) = 1.0;
    a(srow, scol++) = -1.0;
  }
  // rewrite: rows built as  m z - t - s = -q  i.e.  (Mz+q)_j - t - s_j = 0
  for (int c = 0; c < 2 * n; ++c, ++srow) {  // z boxes
    a(srow, c) = 1.0;
    a(srow, scol++) = 1.0;
    rhs[srow] = radius;
  }
  for (int c = 0; c < 2; ++c, ++srow) {  // t boxes
    a(srow, 2 * n + c) = 1.0;
    a(srow, scol++) = 1.0;
    rhs[srow] = tbig;
  }
  cost[2 * n] = -1.0;  // max t
  cost[2 * n + 1] = 1.0;

  MarginResult out;
  LpResult lp = solve_lp(a, rhs, cost);
  if (lp.status != LpResult::Status::kOptimal) return out;
  out.feasible = true;
  Vec z(n);
  for (int c = 0; c < n; ++c) z[c] = lp.x[c] - lp.x[n + c];
  out.z = z;
  out.margin = face_ri_margin(cone, face, m * z + q);
  return out;
}

// Supergradient of the block margin at y, pulled back through M.
Vec margin_supergradient(const Mat& m, const ConeSpec& cone, const FaceDesc& face,
                         const VecE& y) {
  // locate the block attaining the margin
  int argmin = -1, arg_j = -1;
  double best = std::numeric_limits<double>::infinity();
  SocFaceTag tag = SocFaceTag::kFull;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = face.blocks[i];
    const Vec v = cone.block_of(y, i);
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j = 0; j < b.size; ++j) {
          if (std::binary_search(bf.zero_set.begin(), bf.zero_set.end(), j)) continue;
          if (v[j] < best) best = v[j], argmin = i, arg_j = j;
        }
        break;
      case ConeKind::kSecondOrder: {
        if (bf.soc_tag == SocFaceTag::kZero) break;
        const double mg = bf.soc_tag == SocFaceTag::kFull
                              ? v[0] - v.tail(b.size - 1).norm()
                              : v.dot(face_ri_point(cone, face).segment(
                                          cone.block_offset(i), b.size));
        if (mg < best) best = mg, argmin = i, arg_j = -1, tag = bf.soc_tag;
        break;
      }
      case ConeKind::kPsd: {
        if (bf.psd_basis.cols() == 0) break;
        const double mg =
            lambda_min(Mat(bf.psd_basis.transpose() * smat(v) * bf.psd_basis));
        if (mg < best) best = mg, argmin = i, arg_j = -2;
        break;
      }
    }
  }
  if (argmin < 0) return Vec::Zero(m.cols());

  const BlockSpec& b = cone.block(argmin);
  const BlockFace& bf = face.blocks[argmin];
  Vec g_block = Vec::Zero(b.dim());
  if (b.kind == ConeKind::kOrthant) {
    g_block[arg_j] = 1.0;
  } else if (b.kind == ConeKind::kSecondOrder) {
    const Vec v = cone.block_of(y, argmin);
    if (tag == SocFaceTag::kFull) {
      g_block[0] = 1.0;
      const double t = v.tail(b.size - 1).norm();
      if (t > 1e-14) g_block.tail(b.size - 1) = -v.tail(b.size - 1) / t;
    } else {
      Vec r(b.size);
      r[0] = 1.0;
      r.tail(b.size - 1) = bf.ray_tail;
      g_block = r / std::sqrt(2.0);
    }
  } else {
    const Mat u = bf.psd_basis;
    SymEig eig = sym_eig(Mat(u.transpose() * cone.psd_matrix(y, argmin) * u));
    const Vec v0 = eig.vectors.col(0);
    g_block = svec(Mat((u * v0) * (u * v0).transpose()));
  }
  return m.transpose() * cone.embed_block(argmin, g_block);
}

}  // namespace

MarginResult max_face_margin(const Mat& m, const VecE& q, const ConeSpec& cone,
                             const FaceDesc& face, double radius, int iters) {
  MarginResult out;
  const int n = static_cast<int>(m.cols());
  if (cone.dim() == 0) {  // no constraints left: margin is vacuously +inf
    out.feasible = true;
    out.z = Vec::Zero(n);
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }
  if (all_orthant(cone)) return margin_lp(m, q, cone, face, radius);

  // Restrict to the span constraints <M z + q, eta> = 0, eta in F^perp.
  const std::vector<VecE> perp = face_perp_basis(cone, face);
  Mat ap(static_cast<int>(perp.size()), n);
  Vec bp(static_cast<int>(perp.size()));
  for (int i = 0; i < static_cast<int>(perp.size()); ++i) {
    ap.row(i) = perp[i].transpose() * m;
    bp[i] = -perp[i].dot(q);
  }
  Vec z0 = Vec::Zero(n);
  Mat nbasis = Mat::Identity(n, n);
  if (perp.size() > 0) {
    LstSqResult ls = least_squares(ap, bp);
    if (ls.residual > 1e-9 * (1.0 + bp.norm())) return out;  // span unreachable
    z0 = ls.x;
    nbasis = null_space(ap);
  }
  out.feasible = true;
  if (nbasis.cols() == 0) {
    out.z = z0;
    out.margin = face_ri_margin(cone, face, m * z0 + q);
    return out;
  }

  const Mat mred = m * nbasis;
  Vec w = Vec::Zero(nbasis.cols());
  Vec wbest = w;
  double best = face_ri_margin(cone, face, mred * w + (m * z0 + q));
  const VecE qeff = m * z0 + q;
  for (int k = 0; k < iters; ++k) {
    const Vec g = margin_supergradient(mred, cone, face, mred * w + qeff);
    const double gn = g.norm();
    if (gn < 1e-14) break;
    w += (radius / std::sqrt(k + 1.0)) * g / gn;
    if (w.norm() > radius) w *= radius / w.norm();
    const double mg = face_ri_margin(cone, face, mred * w + qeff);
    if (mg > best) {
      best = mg;
      wbest = w;
    }
  }
  out.z = z0 + nbasis * wbest;
  out.margin = best;
  return out;
}

}  // namespace conecert
