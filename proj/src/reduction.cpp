// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/reduction.hpp"

#include <cmath>
#include <limits>

#include "conecert/errors.hpp"

namespace conecert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Mat smooth_eigenbasis(const Mat& abar, const Mat& a, int r) {
  const int k = static_cast<int>(abar.rows());
  if (r < 0 || r > k) throw PreconditionError("smooth_eigenbasis: bad rank");
  SymEig base = sym_eig(abar);
  const double gap = (r == 0) ? kInf : base.values[k - r];  // smallest kept eig
  if ((a - abar).norm() > 0.75 * gap)
    throw RadiusError("smooth_eigenbasis: perturbation exceeds the spectral gap radius");
  const Mat e0 = base.vectors.leftCols(k - r);
  if (r == 0) return Mat::Identity(k, k);
  if (k == r) return Mat(k, 0);
  SymEig cur = sym_eig(a);
  Mat proj = Mat::Zero(k, k);
  for (int j = 0; j < k - r; ++j)
    proj += cur.vectors.col(j) * cur.vectors.col(j).transpose();
  return polar_orthonormalize(proj * e0);
}

ReductionMap build_reduction(const ConeSpec& cone, const VecE& ybar, double tol) {
  if (!contains(cone, ybar, tol))
    throw PreconditionError("build_reduction: base point not in the cone");

  ReductionMap rm;
  rm.original_ = cone;
  rm.ybar_ = ybar;
  rm.rho_min_ = kInf;
  std::vector<BlockSpec> reduced_blocks;

  const Activity act = activity(cone, ybar, tol);
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const Vec v = cone.block_of(ybar, i);
    ReductionMap::Block blk;
    switch (b.kind) {
      case ConeKind::kOrthant: {
        blk.selected = act.blocks[i].active_coords;
        double inactive_min = kInf;
        for (int j = 0; j < b.size; ++j)
          if (std::find(blk.selected.begin(), blk.selected.end(), j) ==
              blk.selected.end())
            inactive_min = std::min(inactive_min, v[j]);
        blk.rho = inactive_min;  // inactive coordinates must stay positive
        if (blk.selected.empty()) {
          blk.kind = ReductionMap::Block::Kind::kDropped;
        } else {
          blk.kind = ReductionMap::Block::Kind::kSelect;
          blk.reduced_block = static_cast<int>(reduced_blocks.size());
          reduced_blocks.push_back(orthant_block(static_cast<int>(blk.selected.size())));
        }
        break;
      }
      case ConeKind::kSecondOrder: {
        const double margin = v[0] - v.tail(b.size - 1).norm();
        if (act.blocks[i].soc_tag == SocActivity::kInterior) {
          blk.kind = ReductionMap::Block::Kind::kDropped;
          blk.rho = margin / std::sqrt(2.0);
        } else if (act.blocks[i].soc_tag == SocActivity::kApex) {
          blk.kind = ReductionMap::Block::Kind::kIdentity;
          blk.rho = kInf;
          blk.reduced_block = static_cast<int>(reduced_blocks.size());
          reduced_blocks.push_back(soc_block(b.size));
        } else {
          blk.kind = ReductionMap::Block::Kind::kSocBoundary;
          blk.rho = v.tail(b.size - 1).norm();  // distance to the axis
          blk.reduced_block = static_cast<int>(reduced_blocks.size());
          reduced_blocks.push_back(orthant_block(1));
        }
        break;
      }
      case ConeKind::kPsd: {
        const int r = act.blocks[i].psd_rank;
        const Mat a = smat(v);
        if (r == b.size) {
          blk.kind = ReductionMap::Block::Kind::kDropped;
          blk.rho = lambda_min(a) / 2.0;
        } else if (r == 0) {
          blk.kind = ReductionMap::Block::Kind::kIdentity;
          blk.rho = kInf;
          blk.reduced_block = static_cast<int>(reduced_blocks.size());
          reduced_blocks.push_back(psd_block(b.size));
        } else {
          SymEig eig = sym_eig(a);
          const double lam_pos = eig.values[b.size - r];
          if (lam_pos < 10.0 * tol)
            throw NumericError(
                "build_reduction: psd block " + std::to_string(i + 1) +
                " has near-zero spectral gap (" + std::to_string(lam_pos) +
                "); the smooth eigenbasis is not defined across gap collapse");
          blk.kind = ReductionMap::Block::Kind::kPsdReduce;
          blk.rank = r;
          blk.kernel_basis = eig.vectors.leftCols(b.size - r);
          blk.rho = lam_pos / 2.0;
          blk.fd_step = 1e-4 * blk.rho;
          blk.reduced_block = static_cast<int>(reduced_blocks.size());
          reduced_blocks.push_back(psd_block(b.size - r));
        }
        break;
      }
    }
    rm.rho_min_ = std::min(rm.rho_min_, blk.rho);
    rm.blocks_.push_back(std::move(blk));
  }
  rm.reduced_ = ConeSpec(reduced_blocks);
  return rm;
}

void ReductionMap::check_radius(const VecE& y) const {
  original_.check_layout(y);
  for (int i = 0; i < original_.num_blocks(); ++i) {
    const Block& blk = blocks_[i];
    if (blk.rho == kInf) continue;
    const double dist =
        (original_.block_of(y, i) - original_.block_of(ybar_, i)).norm();
    if (dist > blk.rho)
      throw RadiusError("reduction evaluated outside its validity radius (block " +
                        std::to_string(i + 1) + ", dist " + std::to_string(dist) +
                        " > rho " + std::to_string(blk.rho) + ")");
  }
}

namespace {

// Closed form pieces for the second-order cone boundary reducer.
double soc_xi(const Vec& v) { return v[0] - v.tail(v.size() - 1).norm(); }

Vec soc_grad(const Vec& v) {
  Vec g(v.size());
  g[0] = 1.0;
  g.tail(v.size() - 1) = -v.tail(v.size() - 1) / v.tail(v.size() - 1).norm();
  return g;
}

double soc_hess_quad(const Vec& v, const Vec& u) {
  const Vec t = v.tail(v.size() - 1);
  const Vec ut = u.tail(u.size() - 1);
  const double tn = t.norm();
  const Vec w = t / tn;
  return -(ut.squaredNorm() - std::pow(w.dot(ut), 2)) / tn;
}

}  // namespace

// PSD reducer: closed-form Xi via the smooth eigenbasis; derivatives by
// Richardson-extrapolated central differences of Xi (the smooth projector
// basis keeps the differences stable inside the gap radius).
namespace {

Vec psd_xi(const ReductionMap::Block& blk, const Mat& abar, const Mat& a) {
  const Mat e = smooth_eigenbasis(abar, a, blk.rank);
  return svec(Mat(e.transpose() * a * e));
}

Vec psd_dxi_dir(const ReductionMap::Block& blk, const Mat& abar, const Mat& a,
                const Mat& u) {
  const double un = u.norm();
  if (un < 1e-15) return Vec::Zero(svec_dim(static_cast<int>(abar.rows()) - blk.rank));
  const Mat uh = u / un;
  const double h = blk.fd_step;
  auto probe = [&](double s) { return psd_xi(blk, abar, a + s * uh); };
  const Vec d_h = (probe(h) - probe(-h)) / (2 * h);
  const Vec d_h2 = (probe(h / 2) - probe(-h / 2)) / h;
  return un * (4.0 * d_h2 - d_h) / 3.0;
}

Vec psd_d2xi_dir(const ReductionMap::Block& blk, const Mat& abar, const Mat& a,
                 const Mat& u) {
  const double un = u.norm();
  const int out_dim = svec_dim(static_cast<int>(abar.rows()) - blk.rank);
  if (un < 1e-15) return Vec::Zero(out_dim);
  const Mat uh = u / un;
  const double h = blk.fd_step;
  const Vec f0 = psd_xi(blk, abar, a);
  auto second = [&](double s) {
    return Vec((psd_xi(blk, abar, a + s * uh) - 2 * f0 + psd_xi(blk, abar, a - s * uh)) /
               (s * s));
  };
  const Vec s_h = second(h);
  const Vec s_h2 = second(h / 2);
  return un * un * (4.0 * s_h2 - s_h) / 3.0;
}

}  // namespace

VecE ReductionMap::xi(const VecE& y) const {
  check_radius(y);
  VecE out = VecE::Zero(reduced_.dim());
  for (int i = 0; i < original_.num_blocks(); ++i) {
    const Block& blk = blocks_[i];
    if (blk.reduced_block < 0) continue;
    const Vec v = original_.block_of(y, i);
    switch (blk.kind) {
      case Block::Kind::kSelect: {
        Vec s(static_cast<int>(blk.selected.size()));
        for (int j = 0; j < s.size(); ++j) s[j] = v[blk.selected[j]];
        reduced_.set_block(out, blk.reduced_block, s);
        break;
      }
      case Block::Kind::kIdentity:
        reduced_.set_block(out, blk.reduced_block, v);
        break;
      case Block::Kind::kSocBoundary:
        reduced_.set_block(out, blk.reduced_block, Vec::Constant(1, soc_xi(v)));
        break;
      case Block::Kind::kPsdReduce:
        reduced_.set_block(out, blk.reduced_block,
                           psd_xi(blk, original_.psd_matrix(ybar_, i), smat(v)));
        break;
      case Block::Kind::kDropped:
        break;
    }
  }
  return out;
}

VecE ReductionMap::dxi(const VecE& y, const VecE& u) const {
  check_radius(y);
  original_.check_layout(u);
  VecE out = VecE::Zero(reduced_.dim());
  for (int i = 0; i < original_.num_blocks(); ++i) {
    const Block& blk = blocks_[i];
    if (blk.reduced_block < 0) continue;
    const Vec v = original_.block_of(y, i);
    const Vec ub = original_.block_of(u, i);
    switch (blk.kind) {
      case Block::Kind::kSelect: {
        Vec s(static_cast<int>(blk.selected.size()));
        for (int j = 0; j < s.size(); ++j) s[j] = ub[blk.selected[j]];
        reduced_.set_block(out, blk.reduced_block, s);
        break;
      }
      case Block::Kind::kIdentity:
        reduced_.set_block(out, blk.reduced_block, ub);
        break;
      case Block::Kind::kSocBoundary:
        reduced_.set_block(out, blk.reduced_block,
                           Vec::Constant(1, soc_grad(v).dot(ub)));
        break;
      case Block::Kind::kPsdReduce:
        reduced_.set_block(
            out, blk.reduced_block,
            psd_dxi_dir(blk, original_.psd_matrix(ybar_, i), smat(v), smat(ub)));
        break;
      case Block::Kind::kDropped:
        break;
    }
  }
  return out;
}

Mat ReductionMap::dxi_matrix(const VecE& y) const {
  Mat m = Mat::Zero(reduced_.dim(), original_.dim());
  for (int c = 0; c < original_.dim(); ++c) {
    VecE u = VecE::Zero(original_.dim());
    u[c] = 1.0;
    m.col(c) = dxi(y, u);
  }
  return m;
}

VecE ReductionMap::d2xi_dir(const VecE& y, const VecE& u) const {
  check_radius(y);
  original_.check_layout(u);
  VecE out = VecE::Zero(reduced_.dim());
  for (int i = 0; i < original_.num_blocks(); ++i) {
    const Block& blk = blocks_[i];
    if (blk.reduced_block < 0) continue;
    const Vec v = original_.block_of(y, i);
    const Vec ub = original_.block_of(u, i);
    switch (blk.kind) {
      case Block::Kind::kSelect:
      case Block::Kind::kIdentity:
        break;  // linear reducers: D2Xi = 0
      case Block::Kind::kSocBoundary:
        reduced_.set_block(out, blk.reduced_block,
                           Vec::Constant(1, soc_hess_quad(v, ub)));
        break;
      case Block::Kind::kPsdReduce:
        reduced_.set_block(
            out, blk.reduced_block,
            psd_d2xi_dir(blk, original_.psd_matrix(ybar_, i), smat(v), smat(ub)));
        break;
      case Block::Kind::kDropped:
        break;
    }
  }
  return out;
}

VecE ReductionMap::dxi_adjoint(const VecE& y, const VecE& eta) const {
  reduced_.check_layout(eta);
  return dxi_matrix(y).transpose() * eta;
}

ReducedProblem::ReducedProblem(ProblemDef problem, Vec xbar, double tol)
    : problem_(std::move(problem)), tol_(tol) {
  point_ = make_eval_point(problem_, xbar);
  map_ = build_reduction(problem_.cone(), point_.g, tol);
  dgbar_base_ = map_.dxi_matrix(point_.g) * point_.dg;
}

VecE ReducedProblem::gbar(const Vec& x) const { return map_.xi(eval_G(problem_, x)); }

Mat ReducedProblem::dgbar(const Vec& x) const {
  const VecE g = eval_G(problem_, x);
  return map_.dxi_matrix(g) * jac_G(problem_, x);
}

VecE ReducedProblem::d2gbar_dir(const Vec& x, const Vec& d) const {
  const VecE g = eval_G(problem_, x);
  const VecE u = jac_G(problem_, x) * d;
  return map_.dxi(g, hess_G_dir(problem_, x, d)) + map_.d2xi_dir(g, u);
}

VecE lift_multiplier(const ReductionMap& rm, const Vec& y_reduced) {
  return rm.dxi_adjoint(rm.base_point(), y_reduced);
}

Vec pull_multiplier(const ReductionMap& rm, const VecE& y_original, double tol) {
  const Mat adj = rm.dxi_matrix(rm.base_point()).transpose();
  LstSqResult ls = least_squares(adj, y_original);
  if (ls.residual > tol * (1.0 + y_original.norm()))
    throw NumericError("pull_multiplier: vector outside the adjoint range, residual " +
                       std::to_string(ls.residual));
  return ls.x;
}

double sigma_term(const ReducedProblem& rp, const Vec& d, const VecE& y_original,
                  const Vec& y_reduced) {
  const ReductionMap& rm = rp.reduction();
  const VecE lifted = lift_multiplier(rm, y_reduced);
  if ((lifted - y_original).norm() > 1e-8 * (1.0 + y_original.norm()))
    throw NumericError("sigma_term: Ybar does not match DXi*[y_reduced]");
  const VecE u = rp.base().dg * d;
  return -rm.d2xi_dir(rp.base().g, u).dot(y_reduced);
}

}  // namespace conecert
