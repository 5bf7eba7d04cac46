// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <vector>

#include "conecert/cones.hpp"

namespace conecert {

// A face of a product cone, one descriptor per block.
//   orthant: zero set Z, face {y >= 0 : y_j = 0 for j in Z}
//   second order: Zero / Ray(unit tail w) / Full
//   psd: orthonormal U (k x r), face {U M U' : M in S^r_+}; r=0 apex, r=k full
enum class SocFaceTag { kZero, kRay, kFull };

struct BlockFace {
  std::vector<int> zero_set;            // orthant (sorted, 0-based)
  SocFaceTag soc_tag = SocFaceTag::kFull;
  Vec ray_tail;
  Mat psd_basis;
};

struct FaceDesc {
  std::vector<BlockFace> blocks;
};

FaceDesc full_face(const ConeSpec& cone);
FaceDesc zero_face(const ConeSpec& cone);
FaceDesc face_of_activity(const ConeSpec& cone, const Activity& act);

int face_dim(const ConeSpec& cone, const FaceDesc& f);  // dim span(F)
bool face_is_zero(const ConeSpec& cone, const FaceDesc& f);
bool face_is_full(const ConeSpec& cone, const FaceDesc& f, double tol = 1e-10);

// Orthonormal bases of span(F) and of F^perp = span(F)^perp, as full-space
// vectors.
std::vector<VecE> face_span_basis(const ConeSpec& cone, const FaceDesc& f);
std::vector<VecE> face_perp_basis(const ConeSpec& cone, const FaceDesc& f);

// Cone points of F whose span is span(F); they witness face containment.
std::vector<VecE> face_generators(const ConeSpec& cone, const FaceDesc& f);

// Canonical relative-interior point of F (zero vector for the zero face).
VecE face_ri_point(const ConeSpec& cone, const FaceDesc& f);

// Conjugate face F^triangle = -C_polar intersect F^perp.
FaceDesc conjugate_face(const ConeSpec& cone, const FaceDesc& f);

FaceDesc minimal_face_of_point(const ConeSpec& cone, const VecE& y, double tol);

// Membership of y in F: cone membership plus span(F) membership, both at tol.
bool face_contains(const ConeSpec& cone, const FaceDesc& f, const VecE& y, double tol);

// Relative-interior margin of y within F. Assumes y in span(F); blocks whose
// face is a point contribute +inf. Positive iff y in ri(F).
double face_ri_margin(const ConeSpec& cone, const FaceDesc& f, const VecE& y);

// Exact Euclidean projection onto F (blockwise closed forms) and, via the
// Moreau decomposition, onto the polar cone F_polar.
VecE project_face(const ConeSpec& cone, const FaceDesc& f, const VecE& y);
VecE project_face_polar(const ConeSpec& cone, const FaceDesc& f, const VecE& y);

// The exposed subface F n {S}^perp for S in F_polar. S should be normalized;
// coordinates below cut_tol are treated as zero.
FaceDesc face_cut(const ConeSpec& cone, const FaceDesc& f, const VecE& s,
                  double cut_tol = 1e-7);

bool face_equal(const ConeSpec& cone, const FaceDesc& a, const FaceDesc& b,
                double tol = 1e-8);

// Length bound for strictly decreasing face chains (orthant m, soc 2, psd k).
int face_chain_bound(const ConeSpec& cone);

// Subface enumeration. Orthant blocks are exact (2^m Boolean lattice); soc(2)
// and rank<=1 psd faces are exact finite lists; the continuum families get
// the canonical chain plus `budget` seeded samples per rank level.
struct SubfaceEnum {
  std::vector<FaceDesc> faces;
  bool exact = true;
};
SubfaceEnum subfaces(const ConeSpec& cone, const FaceDesc& f, int budget,
                     std::uint64_t seed, std::size_t max_faces = 200000);

// Sampled audit of A3: (F^triangle)^perp n C == F.
bool a3_check(const ConeSpec& cone, const FaceDesc& f, double tol,
              std::uint64_t seed = 2026);

// Caratheodory-style decomposition of Y in ri(F): s = dim span(F) linearly
// independent cone points eta_i and weights alpha_i > 0 with sum alpha*eta = Y.
struct ConicDecomposition {
  std::vector<VecE> eta;
  std::vector<double> alpha;
};
ConicDecomposition ri_conic_decomposition(const ConeSpec& cone, const FaceDesc& f,
                                          const VecE& y, double tol);

}  // namespace conecert
