// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>

#include "conecert/faces.hpp"

namespace conecert {

// Projector onto the affine set {x : A x = b}, with emptiness detection.
class AffineProjector {
 public:
  AffineProjector(const Mat& a, const Vec& b);
  bool consistent(double tol) const { return lstsq_residual_ <= tol; }
  double lstsq_residual() const { return lstsq_residual_; }
  VecE operator()(const VecE& x) const;

 private:
  Mat a_;
  Vec b_;
  Mat pinv_;  // Moore-Penrose pseudo-inverse of a
  double lstsq_residual_ = 0.0;
};

// Dykstra's alternating projections between the affine set {x : A x = b} and
// the face-cone F (or its polar). Returns the cone-side iterate; `converged`
// means the two sides met within tol. A residual plateau above tol is the
// operational certificate that the intersection is empty.
struct DykstraResult {
  VecE point;            // lies exactly in the cone side
  double residual = 0.0; // final separation between the two sides
  int iterations = 0;
  bool converged = false;
};

DykstraResult dykstra_affine_face(const Mat& a, const Vec& b, const ConeSpec& cone,
                                  const FaceDesc& face, bool polar, const VecE& start,
                                  double tol, int max_iter);

// Subsolver for the exposing-vector step shared by the minimal-face loop and
// linear facial reduction: seeks S in F_polar n Ker(M*) [n {b_orth}^perp]
// that is strictly negative somewhere on ri(F). Orthant-only cones use an
// exact LP over sign patterns; mixed cones use alternating projections with
// the strict-negativity probe <S, c_ri> = -1.
struct ExposingResult {
  bool found = false;
  VecE s;                 // normalized certificate when found
  double residual = 0.0;  // affine residual of the certificate
};

ExposingResult find_exposing_vector(const Mat& m, const ConeSpec& cone,
                                    const FaceDesc& face,
                                    const VecE* b_orth,  // optional {B}^perp row
                                    double tol, int max_iter);

// Maximizes the relative-interior margin of M z + q over F subject to the
// span constraints <M z + q, eta_i> = 0 and |z| bounded by radius. Orthant
// cones take an exact LP; mixed cones use projected supergradient ascent.
struct MarginResult {
  bool feasible = false;  // span constraints solvable
  Vec z;
  double margin = 0.0;
};

MarginResult max_face_margin(const Mat& m, const VecE& q, const ConeSpec& cone,
                             const FaceDesc& face, double radius, int iters = 500);

}  // namespace conecert
