// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conecert/errors.hpp"

namespace conecert {

BlockSpec orthant_block(int m) {
  if (m < 1) throw DimensionError("orthant block needs positive size");
  return {ConeKind::kOrthant, m};
}

BlockSpec soc_block(int m) {
  if (m < 1) throw DimensionError("second-order block needs size >= 1");
  if (m == 1) return {ConeKind::kOrthant, 1};  // L_1 = R_+
  return {ConeKind::kSecondOrder, m};
}

BlockSpec psd_block(int k) {
  if (k < 1) throw DimensionError("psd block needs positive size");
  return {ConeKind::kPsd, k};
}

ConeSpec::ConeSpec(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {
  offsets_.reserve(blocks_.size());
  for (auto& b : blocks_) {
    if (b.kind == ConeKind::kSecondOrder && b.size == 1) b = orthant_block(1);
    if (b.size < 1) throw DimensionError("cone block with nonpositive size");
    offsets_.push_back(dim_);
    dim_ += b.dim();
  }
}

Vec ConeSpec::block_of(const VecE& y, int i) const {
  check_layout(y);
  return y.segment(offsets_[i], blocks_[i].dim());
}

void ConeSpec::set_block(VecE& y, int i, const Vec& v) const {
  if (v.size() != blocks_[i].dim()) throw DimensionError("set_block: size mismatch");
  y.segment(offsets_[i], blocks_[i].dim()) = v;
}

Mat ConeSpec::psd_matrix(const VecE& y, int i) const {
  if (blocks_[i].kind != ConeKind::kPsd) throw DimensionError("psd_matrix: not a psd block");
  return smat(block_of(y, i));
}

VecE ConeSpec::embed_block(int i, const Vec& v) const {
  VecE y = VecE::Zero(dim_);
  set_block(y, i, v);
  return y;
}

void ConeSpec::check_layout(const VecE& y) const {
  if (y.size() != dim_)
    throw DimensionError("vector has dimension " + std::to_string(y.size()) +
                         ", cone expects " + std::to_string(dim_));
}

double default_activity_tol(const VecE& y) { return 1e-8 * (1.0 + y.norm()); }

namespace {

double block_margin(const BlockSpec& b, const Vec& v) {
  switch (b.kind) {
    case ConeKind::kOrthant:
      return v.minCoeff();
    case ConeKind::kSecondOrder:
      return v[0] - v.tail(v.size() - 1).norm();
    case ConeKind::kPsd:
      return lambda_min(smat(v));
  }
  return 0.0;
}

}  // namespace

bool contains(const ConeSpec& cone, const VecE& y, double tol) {
  cone.check_layout(y);
  for (int i = 0; i < cone.num_blocks(); ++i)
    if (block_margin(cone.block(i), cone.block_of(y, i)) < -tol) return false;
  return true;
}

bool polar_contains(const ConeSpec& cone, const VecE& y, double tol) {
  return contains(cone, -y, tol);  // orthant, soc and psd blocks are self-dual
}

VecE interior_point(const ConeSpec& cone) {
  VecE e = VecE::Zero(cone.dim());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    switch (b.kind) {
      case ConeKind::kOrthant:
        cone.set_block(e, i, Vec::Ones(b.size));
        break;
      case ConeKind::kSecondOrder: {
        Vec v = Vec::Zero(b.size);
        v[0] = 1.0;
        cone.set_block(e, i, v);
        break;
      }
      case ConeKind::kPsd:
        cone.set_block(e, i, svec(Mat::Identity(b.size, b.size)));
        break;
    }
  }
  return e;
}

VecE project(const ConeSpec& cone, const VecE& y) {
  cone.check_layout(y);
  VecE p = y;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    Vec v = cone.block_of(y, i);
    switch (b.kind) {
      case ConeKind::kOrthant:
        cone.set_block(p, i, v.cwiseMax(0.0));
        break;
      case ConeKind::kSecondOrder: {
        const double t = v.tail(v.size() - 1).norm();
        if (v[0] >= t) break;                    // already in the cone
        if (v[0] <= -t) {                        // in the polar: apex
          cone.set_block(p, i, Vec::Zero(b.size));
          break;
        }
        Vec w = v;
        const double s = 0.5 * (v[0] + t);
        w[0] = s;
        if (t > 0) w.tail(v.size() - 1) *= s / t;
        cone.set_block(p, i, w);
        break;
      }
      case ConeKind::kPsd: {
        SymEig eig = sym_eig(smat(v));
        Mat r = Mat::Zero(b.size, b.size);
        for (int j = 0; j < b.size; ++j)
          if (eig.values[j] > 0)
            r += eig.values[j] * eig.vectors.col(j) * eig.vectors.col(j).transpose();
        cone.set_block(p, i, svec(r));
        break;
      }
    }
  }
  return p;
}

double interior_margin(const ConeSpec& cone, const VecE& y) {
  cone.check_layout(y);
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cone.num_blocks(); ++i)
    m = std::min(m, block_margin(cone.block(i), cone.block_of(y, i)));
  return m;
}

Activity activity(const ConeSpec& cone, const VecE& y, double tol) {
  if (!contains(cone, y, tol)) throw PreconditionError("activity: point not in the cone");
  Activity act;
  act.blocks.resize(cone.num_blocks());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const Vec v = cone.block_of(y, i);
    BlockActivity& ba = act.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j = 0; j < b.size; ++j)
          if (std::abs(v[j]) <= tol) ba.active_coords.push_back(j);
        break;
      case ConeKind::kSecondOrder: {
        const double t = v.tail(v.size() - 1).norm();
        if (v.norm() <= tol) {
          ba.soc_tag = SocActivity::kApex;
        } else if (v[0] - t > tol) {
          ba.soc_tag = SocActivity::kInterior;
        } else {
          ba.soc_tag = SocActivity::kBoundaryRay;
          ba.ray_tail = v.tail(v.size() - 1) / t;
        }
        break;
      }
      case ConeKind::kPsd: {
        SymEig eig = sym_eig(smat(v));
        int r = 0;
        for (int j = 0; j < b.size; ++j)
          if (eig.values[j] > tol) ++r;
        ba.psd_rank = r;
        ba.kernel_basis = eig.vectors.leftCols(b.size - r);
        break;
      }
    }
  }
  return act;
}

bool tangent_contains(const ConeSpec& cone, const VecE& y, const Activity& act,
                      const VecE& u, double tol) {
  cone.check_layout(u);
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const Vec ub = cone.block_of(u, i);
    const BlockActivity& ba = act.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j : ba.active_coords)
          if (ub[j] < -tol) return false;
        break;
      case ConeKind::kSecondOrder:
        if (ba.soc_tag == SocActivity::kApex) {
          if (ub[0] - ub.tail(ub.size() - 1).norm() < -tol) return false;
        } else if (ba.soc_tag == SocActivity::kBoundaryRay) {
          if (ub[0] - ba.ray_tail.dot(ub.tail(ub.size() - 1)) < -tol) return false;
        }
        break;
      case ConeKind::kPsd: {
        const Mat& e0 = ba.kernel_basis;
        if (e0.cols() > 0 &&
            lambda_min(e0.transpose() * smat(ub) * e0) < -tol)
          return false;
        break;
      }
    }
    (void)y;
  }
  return true;
}

std::vector<VecE> tangent_lineality_basis(const ConeSpec& cone, const Activity& act) {
  std::vector<VecE> basis;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockActivity& ba = act.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j = 0; j < b.size; ++j) {
          if (std::find(ba.active_coords.begin(), ba.active_coords.end(), j) ==
              ba.active_coords.end()) {
            Vec v = Vec::Zero(b.size);
            v[j] = 1.0;
            basis.push_back(cone.embed_block(i, v));
          }
        }
        break;
      case ConeKind::kSecondOrder: {
        const int m = b.size;
        if (ba.soc_tag == SocActivity::kInterior) {
          for (int j = 0; j < m; ++j) {
            Vec v = Vec::Zero(m);
            v[j] = 1.0;
            basis.push_back(cone.embed_block(i, v));
          }
        } else if (ba.soc_tag == SocActivity::kBoundaryRay) {
          // Tangent cone is the halfspace u1 >= <w, u_tail>; its lineality is
          // the hyperplane u1 = <w, u_tail>.
          Vec r(m);
          r[0] = 1.0;
          r.tail(m - 1) = ba.ray_tail;
          basis.push_back(cone.embed_block(i, r / std::sqrt(2.0)));
          Mat wperp = orth_complement(ba.ray_tail, m - 1);
          for (int c = 0; c < wperp.cols(); ++c) {
            Vec v = Vec::Zero(m);
            v.tail(m - 1) = wperp.col(c);
            basis.push_back(cone.embed_block(i, v));
          }
        }
        // apex: lineality of L_m is {0}
        break;
      }
      case ConeKind::kPsd: {
        const int k = b.size;
        const Mat& e0 = ba.kernel_basis;  // k x (k-r)
        const int knull = static_cast<int>(e0.cols());
        if (knull == 0) {
          // interior: everything
          for (int c = 0; c < svec_dim(k); ++c) {
            Vec v = Vec::Zero(svec_dim(k));
            v[c] = 1.0;
            basis.push_back(cone.embed_block(i, v));
          }
          break;
        }
        // {B : E0' B E0 = 0}: range-range and range-kernel mixed directions.
        Mat u = orth_complement(e0, k);  // k x r, range of the point
        const int r = static_cast<int>(u.cols());
        for (int p = 0; p < r; ++p)
          for (int q = p; q < r; ++q) {
            Mat s = u.col(p) * u.col(q).transpose() + u.col(q) * u.col(p).transpose();
            s *= (p == q) ? 0.5 : 0.5 * std::sqrt(2.0);
            basis.push_back(cone.embed_block(i, svec(s)));
          }
        for (int p = 0; p < r; ++p)
          for (int q = 0; q < knull; ++q) {
            Mat s = (u.col(p) * e0.col(q).transpose() +
                     e0.col(q) * u.col(p).transpose()) /
                    std::sqrt(2.0);
            basis.push_back(cone.embed_block(i, svec(s)));
          }
        break;
      }
    }
  }
  return basis;
}

std::string to_string(const BlockSpec& b) {
  switch (b.kind) {
    case ConeKind::kOrthant:
      return "orthant(" + std::to_string(b.size) + ")";
    case ConeKind::kSecondOrder:
      return "soc(" + std::to_string(b.size) + ")";
    case ConeKind::kPsd:
      return "psd(" + std::to_string(b.size) + ")";
  }
  return "?";
}

}  // namespace conecert
