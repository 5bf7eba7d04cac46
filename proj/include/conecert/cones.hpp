// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "conecert/linalg.hpp"

namespace conecert {

// Elements of the ambient space E are flat vectors laid out block by block;
// PSD blocks are stored in scaled symmetric vectorization (svec) so the flat
// dot product equals the trace inner product everywhere.
using VecE = Vec;

enum class ConeKind { kOrthant, kSecondOrder, kPsd };

struct BlockSpec {
  ConeKind kind = ConeKind::kOrthant;
  int size = 0;  // m for orthant / second-order, k for psd

  int dim() const {
    return kind == ConeKind::kPsd ? size * (size + 1) / 2 : size;
  }
  bool operator==(const BlockSpec&) const = default;
};

BlockSpec orthant_block(int m);
BlockSpec soc_block(int m);  // m == 1 collapses to orthant(1)
BlockSpec psd_block(int k);

class ConeSpec {
 public:
  ConeSpec() = default;
  explicit ConeSpec(std::vector<BlockSpec> blocks);

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const BlockSpec& block(int i) const { return blocks_[i]; }
  int block_offset(int i) const { return offsets_[i]; }
  int dim() const { return dim_; }

  Vec block_of(const VecE& y, int i) const;
  void set_block(VecE& y, int i, const Vec& v) const;
  // PSD blocks only: the symmetric matrix held by block i of y.
  Mat psd_matrix(const VecE& y, int i) const;
  // Embeds a single-block vector into a zero-padded full-space vector.
  VecE embed_block(int i, const Vec& v) const;

  void check_layout(const VecE& y) const;
  bool operator==(const ConeSpec&) const = default;

 private:
  std::vector<BlockSpec> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

// Activity structure of a feasible point, blockwise.
enum class SocActivity { kInterior, kApex, kBoundaryRay };

struct BlockActivity {
  std::vector<int> active_coords;  // orthant: coordinates at zero (0-based)
  SocActivity soc_tag = SocActivity::kInterior;
  Vec ray_tail;                    // unit tail direction w on a boundary ray
  int psd_rank = 0;                // eigenvalues > tol
  Mat kernel_basis;                // k x (k - rank), orthonormal
};

struct Activity {
  std::vector<BlockActivity> blocks;
};

// Scale-aware default: 1e-8 absolute, scaled by (1 + |y|).
double default_activity_tol(const VecE& y);

bool contains(const ConeSpec& cone, const VecE& y, double tol);
bool polar_contains(const ConeSpec& cone, const VecE& y, double tol);

// Canonical strictly interior element: ones / (1,0,...,0) / identity.
VecE interior_point(const ConeSpec& cone);

// Euclidean projection onto the cone, blockwise closed forms.
VecE project(const ConeSpec& cone, const VecE& y);

// Signed distance-to-boundary proxy: the minimum over blocks of the block's
// interior margin (orthant: min coord; soc: y1-|tail|; psd: lambda_min).
// Positive iff y is strictly interior. Empty cone -> +inf.
double interior_margin(const ConeSpec& cone, const VecE& y);

Activity activity(const ConeSpec& cone, const VecE& y, double tol);

// Tangent-cone membership at a feasible point with the given activity.
bool tangent_contains(const ConeSpec& cone, const VecE& y, const Activity& act,
                      const VecE& u, double tol);

// Orthonormal basis of lin(T_K(y)), the lineality space of the tangent cone.
std::vector<VecE> tangent_lineality_basis(const ConeSpec& cone, const Activity& act);

std::string to_string(const BlockSpec& b);

}  // namespace conecert
