// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/faces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conecert/errors.hpp"
#include "conecert/rng.hpp"

namespace conecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

std::vector<int> complement_of(const std::vector<int>& z, int m) {
  std::vector<int> c;
  for (int j = 0; j < m; ++j)
    if (!std::binary_search(z.begin(), z.end(), j)) c.push_back(j);
  return c;
}

Vec ray_generator(const BlockFace& bf, int m) {
  Vec r(m);
  r[0] = 1.0;
  r.tail(m - 1) = bf.ray_tail;
  return r / kSqrt2;
}

// Orthonormal basis {S_pq} of the symmetric matrices over the columns of u.
void sym_pair_basis(const Mat& u, std::vector<Mat>* out) {
  const int r = static_cast<int>(u.cols());
  for (int p = 0; p < r; ++p)
    for (int q = p; q < r; ++q) {
      Mat s = u.col(p) * u.col(q).transpose() + u.col(q) * u.col(p).transpose();
      s *= (p == q) ? 0.5 : 0.5 * kSqrt2;
      out->push_back(s);
    }
}

Mat psd_clamp(const Mat& a) {
  SymEig eig = sym_eig(a);
  Mat r = Mat::Zero(a.rows(), a.cols());
  for (int j = 0; j < a.rows(); ++j)
    if (eig.values[j] > 0)
      r += eig.values[j] * eig.vectors.col(j) * eig.vectors.col(j).transpose();
  return r;
}

}  // namespace

FaceDesc full_face(const ConeSpec& cone) {
  FaceDesc f;
  f.blocks.resize(cone.num_blocks());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    if (b.kind == ConeKind::kSecondOrder) f.blocks[i].soc_tag = SocFaceTag::kFull;
    if (b.kind == ConeKind::kPsd) f.blocks[i].psd_basis = Mat::Identity(b.size, b.size);
  }
  return f;
}

FaceDesc zero_face(const ConeSpec& cone) {
  FaceDesc f;
  f.blocks.resize(cone.num_blocks());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j = 0; j < b.size; ++j) f.blocks[i].zero_set.push_back(j);
        break;
      case ConeKind::kSecondOrder:
        f.blocks[i].soc_tag = SocFaceTag::kZero;
        break;
      case ConeKind::kPsd:
        f.blocks[i].psd_basis = Mat(b.size, 0);
        break;
    }
  }
  return f;
}

FaceDesc face_of_activity(const ConeSpec& cone, const Activity& act) {
  FaceDesc f;
  f.blocks.resize(cone.num_blocks());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockActivity& ba = act.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        f.blocks[i].zero_set = ba.active_coords;
        break;
      case ConeKind::kSecondOrder:
        f.blocks[i].soc_tag = ba.soc_tag == SocActivity::kInterior ? SocFaceTag::kFull
                              : ba.soc_tag == SocActivity::kApex   ? SocFaceTag::kZero
                                                                   : SocFaceTag::kRay;
        if (ba.soc_tag == SocActivity::kBoundaryRay) f.blocks[i].ray_tail = ba.ray_tail;
        break;
      case ConeKind::kPsd:
        f.blocks[i].psd_basis = orth_complement(ba.kernel_basis, b.size);
        break;
    }
  }
  return f;
}

int face_dim(const ConeSpec& cone, const FaceDesc& f) {
  int d = 0;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        d += b.size - static_cast<int>(bf.zero_set.size());
        break;
      case ConeKind::kSecondOrder:
        d += bf.soc_tag == SocFaceTag::kFull ? b.size
             : bf.soc_tag == SocFaceTag::kRay ? 1
                                              : 0;
        break;
      case ConeKind::kPsd:
        d += svec_dim(static_cast<int>(bf.psd_basis.cols()));
        break;
    }
  }
  return d;
}

bool face_is_zero(const ConeSpec& cone, const FaceDesc& f) {
  return face_dim(cone, f) == 0;
}

bool face_is_full(const ConeSpec& cone, const FaceDesc& f, double tol) {
  (void)tol;
  return face_dim(cone, f) == cone.dim();
}

std::vector<VecE> face_span_basis(const ConeSpec& cone, const FaceDesc& f) {
  std::vector<VecE> basis;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j : complement_of(bf.zero_set, b.size)) {
          Vec v = Vec::Zero(b.size);
          v[j] = 1.0;
          basis.push_back(cone.embed_block(i, v));
        }
        break;
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kFull) {
          for (int j = 0; j < b.size; ++j) {
            Vec v = Vec::Zero(b.size);
            v[j] = 1.0;
            basis.push_back(cone.embed_block(i, v));
          }
        } else if (bf.soc_tag == SocFaceTag::kRay) {
          basis.push_back(cone.embed_block(i, ray_generator(bf, b.size)));
        }
        break;
      case ConeKind::kPsd: {
        std::vector<Mat> sym;
        sym_pair_basis(bf.psd_basis, &sym);
        for (const Mat& s : sym) basis.push_back(cone.embed_block(i, svec(s)));
        break;
      }
    }
  }
  return basis;
}

std::vector<VecE> face_perp_basis(const ConeSpec& cone, const FaceDesc& f) {
  std::vector<VecE> basis;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j : bf.zero_set) {
          Vec v = Vec::Zero(b.size);
          v[j] = 1.0;
          basis.push_back(cone.embed_block(i, v));
        }
        break;
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kZero) {
          for (int j = 0; j < b.size; ++j) {
            Vec v = Vec::Zero(b.size);
            v[j] = 1.0;
            basis.push_back(cone.embed_block(i, v));
          }
        } else if (bf.soc_tag == SocFaceTag::kRay) {
          Mat comp = orth_complement(ray_generator(bf, b.size), b.size);
          for (int c = 0; c < comp.cols(); ++c)
            basis.push_back(cone.embed_block(i, comp.col(c)));
        }
        break;
      case ConeKind::kPsd: {
        const Mat& u = bf.psd_basis;
        const int k = b.size;
        Mat v = orth_complement(u, k);
        // {B : U' B U = 0} = mixed U-V directions plus symmetric over V.
        for (int p = 0; p < u.cols(); ++p)
          for (int q = 0; q < v.cols(); ++q) {
            Mat s = (u.col(p) * v.col(q).transpose() +
                     v.col(q) * u.col(p).transpose()) /
                    kSqrt2;
            basis.push_back(cone.embed_block(i, svec(s)));
          }
        std::vector<Mat> sym;
        sym_pair_basis(v, &sym);
        for (const Mat& s : sym) basis.push_back(cone.embed_block(i, svec(s)));
        break;
      }
    }
  }
  return basis;
}

std::vector<VecE> face_generators(const ConeSpec& cone, const FaceDesc& f) {
  std::vector<VecE> gens;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j : complement_of(bf.zero_set, b.size)) {
          Vec v = Vec::Zero(b.size);
          v[j] = 1.0;
          gens.push_back(cone.embed_block(i, v));
        }
        break;
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kRay) {
          gens.push_back(cone.embed_block(i, ray_generator(bf, b.size)));
        } else if (bf.soc_tag == SocFaceTag::kFull) {
          Vec apex = Vec::Zero(b.size);
          apex[0] = 1.0;
          gens.push_back(cone.embed_block(i, apex));
          for (int j = 1; j < b.size; ++j) {
            Vec v = Vec::Zero(b.size);
            v[0] = 1.0;
            v[j] = 1.0;  // boundary point (1, e_j)
            gens.push_back(cone.embed_block(i, v / kSqrt2));
          }
        }
        break;
      case ConeKind::kPsd: {
        const Mat& u = bf.psd_basis;
        const int r = static_cast<int>(u.cols());
        for (int p = 0; p < r; ++p)
          gens.push_back(cone.embed_block(i, svec(Mat(u.col(p) * u.col(p).transpose()))));
        for (int p = 0; p < r; ++p)
          for (int q = p + 1; q < r; ++q) {
            Vec w = (u.col(p) + u.col(q)) / kSqrt2;
            gens.push_back(cone.embed_block(i, svec(Mat(w * w.transpose()))));
          }
        break;
      }
    }
  }
  return gens;
}

VecE face_ri_point(const ConeSpec& cone, const FaceDesc& f) {
  VecE y = VecE::Zero(cone.dim());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant: {
        Vec v = Vec::Zero(b.size);
        for (int j : complement_of(bf.zero_set, b.size)) v[j] = 1.0;
        cone.set_block(y, i, v);
        break;
      }
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kRay) {
          cone.set_block(y, i, ray_generator(bf, b.size));
        } else if (bf.soc_tag == SocFaceTag::kFull) {
          Vec v = Vec::Zero(b.size);
          v[0] = 1.0;
          cone.set_block(y, i, v);
        }
        break;
      case ConeKind::kPsd:
        cone.set_block(y, i, svec(Mat(bf.psd_basis * bf.psd_basis.transpose())));
        break;
    }
  }
  return y;
}

FaceDesc conjugate_face(const ConeSpec& cone, const FaceDesc& f) {
  FaceDesc g;
  g.blocks.resize(cone.num_blocks());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        g.blocks[i].zero_set = complement_of(bf.zero_set, b.size);
        break;
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kFull) {
          g.blocks[i].soc_tag = SocFaceTag::kZero;
        } else if (bf.soc_tag == SocFaceTag::kZero) {
          g.blocks[i].soc_tag = SocFaceTag::kFull;
        } else {
          g.blocks[i].soc_tag = SocFaceTag::kRay;
          g.blocks[i].ray_tail = -bf.ray_tail;
        }
        break;
      case ConeKind::kPsd:
        g.blocks[i].psd_basis = orth_complement(bf.psd_basis, b.size);
        break;
    }
  }
  return g;
}

FaceDesc minimal_face_of_point(const ConeSpec& cone, const VecE& y, double tol) {
  Activity act = activity(cone, y, tol);  // throws on infeasible y
  FaceDesc f;
  f.blocks.resize(cone.num_blocks());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockActivity& ba = act.blocks[i];
    switch (b.kind) {
      case ConeKind::kOrthant:
        f.blocks[i].zero_set = ba.active_coords;
        break;
      case ConeKind::kSecondOrder:
        f.blocks[i].soc_tag = ba.soc_tag == SocActivity::kApex     ? SocFaceTag::kZero
                              : ba.soc_tag == SocActivity::kInterior ? SocFaceTag::kFull
                                                                     : SocFaceTag::kRay;
        if (ba.soc_tag == SocActivity::kBoundaryRay) f.blocks[i].ray_tail = ba.ray_tail;
        break;
      case ConeKind::kPsd: {
        SymEig eig = sym_eig(cone.psd_matrix(y, i));
        int r = 0;
        for (int j = 0; j < b.size; ++j)
          if (eig.values[j] > tol) ++r;
        f.blocks[i].psd_basis = eig.vectors.rightCols(r);
        break;
      }
    }
  }
  return f;
}

bool face_contains(const ConeSpec& cone, const FaceDesc& f, const VecE& y, double tol) {
  if (!contains(cone, y, tol)) return false;
  VecE in_span = VecE::Zero(cone.dim());
  for (const VecE& b : face_span_basis(cone, f)) in_span += b.dot(y) * b;
  return (y - in_span).norm() <= tol * (1.0 + y.norm());
}

double face_ri_margin(const ConeSpec& cone, const FaceDesc& f, const VecE& y) {
  double m = kInf;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    const Vec v = cone.block_of(y, i);
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (int j : complement_of(bf.zero_set, b.size)) m = std::min(m, v[j]);
        break;
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kFull)
          m = std::min(m, v[0] - v.tail(b.size - 1).norm());
        else if (bf.soc_tag == SocFaceTag::kRay)
          m = std::min(m, v.dot(ray_generator(bf, b.size)));
        break;
      case ConeKind::kPsd:
        if (bf.psd_basis.cols() > 0)
          m = std::min(
              m, lambda_min(Mat(bf.psd_basis.transpose() * smat(v) * bf.psd_basis)));
        break;
    }
  }
  return m;
}

VecE project_face(const ConeSpec& cone, const FaceDesc& f, const VecE& y) {
  cone.check_layout(y);
  VecE p = VecE::Zero(cone.dim());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    const Vec v = cone.block_of(y, i);
    switch (b.kind) {
      case ConeKind::kOrthant: {
        Vec w = v.cwiseMax(0.0);
        for (int j : bf.zero_set) w[j] = 0.0;
        cone.set_block(p, i, w);
        break;
      }
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kFull) {
          const double t = v.tail(b.size - 1).norm();
          if (v[0] >= t) {
            cone.set_block(p, i, v);
          } else if (v[0] > -t) {
            Vec w = v;
            const double s = 0.5 * (v[0] + t);
            w[0] = s;
            if (t > 0) w.tail(b.size - 1) *= s / t;
            cone.set_block(p, i, w);
          }
        } else if (bf.soc_tag == SocFaceTag::kRay) {
          const Vec r = ray_generator(bf, b.size);
          cone.set_block(p, i, std::max(0.0, v.dot(r)) * r);
        }
        break;
      case ConeKind::kPsd: {
        const Mat& u = bf.psd_basis;
        if (u.cols() > 0) {
          Mat med = psd_clamp(u.transpose() * smat(v) * u);
          cone.set_block(p, i, svec(Mat(u * med * u.transpose())));
        }
        break;
      }
    }
  }
  return p;
}

VecE project_face_polar(const ConeSpec& cone, const FaceDesc& f, const VecE& y) {
  return y - project_face(cone, f, y);
}

FaceDesc face_cut(const ConeSpec& cone, const FaceDesc& f, const VecE& s,
                  double cut_tol) {
  FaceDesc g = f;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& b = cone.block(i);
    BlockFace& bf = g.blocks[i];
    const Vec sb = cone.block_of(s, i);
    switch (b.kind) {
      case ConeKind::kOrthant: {
        std::vector<int> z = bf.zero_set;
        for (int j : complement_of(bf.zero_set, b.size))
          if (sb[j] < -cut_tol) z.push_back(j);
        std::sort(z.begin(), z.end());
        bf.zero_set = z;
        break;
      }
      case ConeKind::kSecondOrder:
        if (bf.soc_tag == SocFaceTag::kFull) {
          const double t = sb.tail(b.size - 1).norm();
          if (sb.norm() <= cut_tol) break;
          if (-sb[0] - t > cut_tol) {
            bf.soc_tag = SocFaceTag::kZero;  // S interior to the polar
          } else if (t > cut_tol) {
            bf.soc_tag = SocFaceTag::kRay;
            bf.ray_tail = sb.tail(b.size - 1) / t;
          }
        } else if (bf.soc_tag == SocFaceTag::kRay) {
          if (sb.dot(ray_generator(bf, b.size)) < -cut_tol) {
            bf.soc_tag = SocFaceTag::kZero;
            bf.ray_tail = Vec();
          }
        }
        break;
      case ConeKind::kPsd: {
        const Mat& u = bf.psd_basis;
        if (u.cols() == 0) break;
        SymEig eig = sym_eig(Mat(u.transpose() * smat(sb) * u));  // psd-negative
        int keep = 0;
        for (int j = 0; j < eig.values.size(); ++j)
          if (eig.values[j] > -cut_tol) ++keep;
        bf.psd_basis = u * eig.vectors.rightCols(keep);
        break;
      }
    }
  }
  return g;
}

bool face_equal(const ConeSpec& cone, const FaceDesc& a, const FaceDesc& b,
                double tol) {
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& spec = cone.block(i);
    const BlockFace& fa = a.blocks[i];
    const BlockFace& fb = b.blocks[i];
    switch (spec.kind) {
      case ConeKind::kOrthant:
        if (fa.zero_set != fb.zero_set) return false;
        break;
      case ConeKind::kSecondOrder:
        if (fa.soc_tag != fb.soc_tag) return false;
        if (fa.soc_tag == SocFaceTag::kRay &&
            (fa.ray_tail - fb.ray_tail).norm() > tol)
          return false;
        break;
      case ConeKind::kPsd:
        if (fa.psd_basis.cols() != fb.psd_basis.cols()) return false;
        if (fa.psd_basis.cols() > 0 &&
            subspace_distance(fa.psd_basis, fb.psd_basis) > tol)
          return false;
        break;
    }
  }
  return true;
}

int face_chain_bound(const ConeSpec& cone) {
  int n = 0;
  for (const BlockSpec& b : cone.blocks()) {
    switch (b.kind) {
      case ConeKind::kOrthant:
        n += b.size;
        break;
      case ConeKind::kSecondOrder:
        n += 2;
        break;
      case ConeKind::kPsd:
        n += b.size;
        break;
    }
  }
  return n;
}

namespace {

struct BlockFaceList {
  std::vector<BlockFace> faces;
  bool exact = true;
};

BlockFaceList block_subfaces(const BlockSpec& b, const BlockFace& bf, int budget,
                             std::uint64_t seed) {
  BlockFaceList out;
  switch (b.kind) {
    case ConeKind::kOrthant: {
      const std::vector<int> free = complement_of(bf.zero_set, b.size);
      const int nf = static_cast<int>(free.size());
      for (std::uint64_t mask = 0; mask < (1ULL << nf); ++mask) {
        BlockFace sub = bf;
        for (int j = 0; j < nf; ++j)
          if (mask & (1ULL << j)) sub.zero_set.push_back(free[j]);
        std::sort(sub.zero_set.begin(), sub.zero_set.end());
        out.faces.push_back(sub);
      }
      break;
    }
    case ConeKind::kSecondOrder: {
      BlockFace zero;
      zero.soc_tag = SocFaceTag::kZero;
      if (bf.soc_tag == SocFaceTag::kZero) {
        out.faces.push_back(zero);
      } else if (bf.soc_tag == SocFaceTag::kRay) {
        out.faces.push_back(zero);
        out.faces.push_back(bf);
      } else if (b.size == 2) {
        // L_2 is polyhedral: exactly two extreme rays.
        out.faces.push_back(zero);
        for (double w : {1.0, -1.0}) {
          BlockFace ray;
          ray.soc_tag = SocFaceTag::kRay;
          ray.ray_tail = Vec::Constant(1, w);
          out.faces.push_back(ray);
        }
        out.faces.push_back(bf);
      } else {
        out.faces.push_back(zero);
        out.faces.push_back(bf);
        Rng rng(seed, "soc-subface");
        for (int c = 0; c < budget; ++c) {
          BlockFace ray;
          ray.soc_tag = SocFaceTag::kRay;
          ray.ray_tail = rng.unit_vec(b.size - 1);
          out.faces.push_back(ray);
        }
        out.exact = false;  // the boundary-ray family is a continuum
      }
      break;
    }
    case ConeKind::kPsd: {
      const Mat& u = bf.psd_basis;
      const int r = static_cast<int>(u.cols());
      for (int rp = 0; rp <= r; ++rp) {
        BlockFace sub;
        sub.psd_basis = u.leftCols(rp);
        out.faces.push_back(sub);
      }
      if (r >= 2) {
        Rng rng(seed, "psd-subface");
        for (int rp = 1; rp < r; ++rp)
          for (int c = 0; c < budget; ++c) {
            BlockFace sub;
            sub.psd_basis = u * rng.haar_orthonormal(r, rp);
            out.faces.push_back(sub);
          }
        out.exact = false;
      }
      break;
    }
  }
  return out;
}

}  // namespace

SubfaceEnum subfaces(const ConeSpec& cone, const FaceDesc& f, int budget,
                     std::uint64_t seed, std::size_t max_faces) {
  std::vector<BlockFaceList> lists;
  lists.reserve(cone.num_blocks());
  bool exact = true;
  std::size_t total = 1;
  for (int i = 0; i < cone.num_blocks(); ++i) {
    lists.push_back(block_subfaces(cone.block(i), f.blocks[i], budget,
                                   derive_seed(seed, "block", i)));
    exact = exact && lists.back().exact;
    total *= lists.back().faces.size();
    if (total > 100 * max_faces) total = 100 * max_faces;  // overflow guard
  }
  std::size_t stride = 1;
  if (total > max_faces) {
    stride = (total + max_faces - 1) / max_faces;
    exact = false;
  }
  SubfaceEnum out;
  out.exact = exact;
  for (std::size_t idx = 0; idx < total; idx += stride) {
    FaceDesc fd;
    fd.blocks.resize(cone.num_blocks());
    std::size_t rem = idx;
    for (int i = 0; i < cone.num_blocks(); ++i) {
      const std::size_t ni = lists[i].faces.size();
      fd.blocks[i] = lists[i].faces[rem % ni];
      rem /= ni;
    }
    out.faces.push_back(std::move(fd));
  }
  return out;
}

bool a3_check(const ConeSpec& cone, const FaceDesc& f, double tol,
              std::uint64_t seed) {
  const FaceDesc conj = conjugate_face(cone, f);
  const std::vector<VecE> conj_span = face_span_basis(cone, conj);
  auto project_perp = [&](const VecE& y) {
    VecE p = y;
    for (const VecE& b : conj_span) p -= b.dot(y) * b;
    return p;
  };

  Rng rng(seed, "a3");
  const VecE e = interior_point(cone);
  const double scale = 1.0 + e.norm();
  // Forward: points of (F^tri)^perp n C must land in F.
  for (int s = 0; s < 100; ++s) {
    VecE z = e + 0.5 * e.norm() * rng.unit_vec(cone.dim());
    for (int it = 0; it < 400; ++it) {
      VecE next = project(cone, project_perp(z));
      if ((next - z).norm() <= 1e-12 * scale) {
        z = next;
        break;
      }
      z = next;
    }
    if ((z - project_perp(z)).norm() > 1e-8 * scale) continue;  // did not land
    if (!face_contains(cone, f, z, std::max(tol, 1e-7 * scale))) return false;
  }
  // Reverse: points of F must lie in (F^tri)^perp n C.
  const std::vector<VecE> gens = face_generators(cone, f);
  for (int s = 0; s < 100; ++s) {
    VecE y = VecE::Zero(cone.dim());
    for (const VecE& g : gens) y += rng.uniform(0.0, 1.0) * g;
    if (!contains(cone, y, std::max(tol, 1e-9 * (1 + y.norm())))) return false;
    for (const VecE& b : conj_span)
      if (std::abs(b.dot(y)) > std::max(tol, 1e-9 * (1 + y.norm()))) return false;
  }
  return true;
}

ConicDecomposition ri_conic_decomposition(const ConeSpec& cone, const FaceDesc& f,
                                          const VecE& y, double tol) {
  cone.check_layout(y);
  if (y.norm() <= tol) throw PreconditionError("ri_conic_decomposition: Y = 0");
  const std::vector<VecE> span = face_span_basis(cone, f);
  const int s = static_cast<int>(span.size());
  VecE in_span = VecE::Zero(cone.dim());
  for (const VecE& b : span) in_span += b.dot(y) * b;
  if ((y - in_span).norm() > tol * (1.0 + y.norm()) ||
      face_ri_margin(cone, f, y) <= 0)
    throw PreconditionError("ri_conic_decomposition: Y not in ri of the cone");

  ConicDecomposition out;
  if (s == 1) {
    out.eta.push_back(y);
    out.alpha.push_back(1.0);
    return out;
  }

  // Basis of span n {Y}^perp, in span coordinates.
  const Mat b = columns(span, cone.dim());
  const Vec yc = b.transpose() * y;
  const Mat zc = orth_complement(yc, s);  // s x (s-1)
  std::vector<VecE> z;
  for (int j = 0; j < s - 1; ++j) z.push_back(b * zc.col(j));
  VecE zlast = VecE::Zero(cone.dim());
  for (const VecE& v : z) zlast -= v;
  z.push_back(zlast);

  double eps = 1.0;
  for (;;) {
    bool ok = true;
    for (const VecE& v : z)
      if (face_ri_margin(cone, f, y + eps * v) <= tol) {
        ok = false;
        break;
      }
    if (ok) break;
    eps *= 0.5;
    if (eps < 1e-14)
      throw NumericError("ri_conic_decomposition: interior epsilon underflow");
  }

  for (const VecE& v : z) {
    out.eta.push_back(y + eps * v);
    out.alpha.push_back(1.0 / s);
  }
  if (numeric_rank(columns(out.eta, cone.dim())) != s)
    throw NumericError("ri_conic_decomposition: eta not linearly independent");
  return out;
}

}  // namespace conecert
