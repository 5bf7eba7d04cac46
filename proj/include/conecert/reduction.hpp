// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include "conecert/problem.hpp"

namespace conecert {

// Smooth orthonormal basis of the near-kernel eigenspace: for A close to
// abar (rank r with a spectral gap), returns the polar orthonormalization of
// P(A) * E(abar), where P(A) projects onto the smallest k-r eigenvalues.
// Reproduces E(abar) exactly at A = abar and varies smoothly within the gap
// radius; outside it throws RadiusError.
Mat smooth_eigenbasis(const Mat& abar, const Mat& a, int r);

// Local reduction map Xi at ybar = G(xbar), built blockwise:
//   orthant        -> coordinate selection on the active set
//   soc interior   -> block dropped
//   soc apex       -> identity onto a second-order block
//   soc boundary   -> y1 - |tail|, a scalar orthant block
//   psd rank r     -> E(A)' A E(A) onto a psd block of size k-r
// Fully inactive blocks are dropped so the reduced cone C stays solid.
class ReductionMap {
 public:
  ReductionMap() = default;

  const ConeSpec& original_cone() const { return original_; }
  const ConeSpec& reduced_cone() const { return reduced_; }
  const VecE& base_point() const { return ybar_; }
  // Smallest per-block validity radius; sampling neighborhoods stay inside.
  double rho() const { return rho_min_; }
  double block_rho(int orig_block) const { return blocks_[orig_block].rho; }

  VecE xi(const VecE& y) const;
  VecE dxi(const VecE& y, const VecE& u) const;
  Mat dxi_matrix(const VecE& y) const;        // dim(C) x dim(E)
  VecE d2xi_dir(const VecE& y, const VecE& u) const;
  VecE dxi_adjoint(const VecE& y, const VecE& eta) const;

  void check_radius(const VecE& y) const;  // throws RadiusError outside rho

  struct Block {
    enum class Kind { kDropped, kSelect, kIdentity, kSocBoundary, kPsdReduce };
    Kind kind = Kind::kDropped;
    std::vector<int> selected;  // kSelect: retained coordinates
    int reduced_block = -1;     // index in the reduced cone, -1 when dropped
    double rho = 0.0;
    // psd reducer state
    Mat kernel_basis;  // E(abar), k x (k-r)
    int rank = 0;
    double fd_step = 0.0;
  };
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  friend ReductionMap build_reduction(const ConeSpec&, const VecE&, double);

  ConeSpec original_, reduced_;
  VecE ybar_;
  std::vector<Block> blocks_;
  double rho_min_ = 0.0;
};

ReductionMap build_reduction(const ConeSpec& cone, const VecE& ybar, double tol);

// The reduced problem Gbar = Xi o G with cone C, around xbar.
class ReducedProblem {
 public:
  ReducedProblem(ProblemDef problem, Vec xbar, double tol);

  const ProblemDef& problem() const { return problem_; }
  const ReductionMap& reduction() const { return map_; }
  const ConeSpec& original_cone() const { return map_.original_cone(); }
  const ConeSpec& cone() const { return map_.reduced_cone(); }  // C
  const Vec& xbar() const { return point_.x; }
  const EvalPoint& base() const { return point_; }
  const Mat& dgbar_base() const { return dgbar_base_; }  // DGbar(xbar)
  double feas_tol() const { return tol_; }

  VecE gbar(const Vec& x) const;
  Mat dgbar(const Vec& x) const;
  VecE d2gbar_dir(const Vec& x, const Vec& d) const;

 private:
  ProblemDef problem_;
  EvalPoint point_;
  ReductionMap map_;
  Mat dgbar_base_;
  double tol_ = 0.0;
};

// Multiplier correspondence Ybar = DXi(ybar)*[y_red] and its inverse (the
// adjoint is injective, so the pull-back is the least-squares solution with a
// residual gate).
VecE lift_multiplier(const ReductionMap& rm, const Vec& y_reduced);
Vec pull_multiplier(const ReductionMap& rm, const VecE& y_original,
                    double tol = 1e-8);

// Curvature correction sigma(xbar, d, Ybar) = -<D2Xi(ybar)[u,u], y_red> with
// u = DG(xbar)d; y_red must pull back to y_original within 1e-8.
double sigma_term(const ReducedProblem& rp, const Vec& d, const VecE& y_original,
                  const Vec& y_reduced);

}  // namespace conecert
