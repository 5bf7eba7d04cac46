// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/problem.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "conecert/errors.hpp"

namespace conecert {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

ConeSpec ProblemDef::cone() const {
  std::vector<BlockSpec> bs;
  bs.reserve(blocks.size());
  for (const ProblemBlock& b : blocks) bs.push_back(b.spec);
  return ConeSpec(bs);
}

ProblemDef problem_from_json(const Json& j) {
  ProblemDef p;
  try {
    p.name = j.value("name", std::string("unnamed"));
    p.n = j.at("n").get<int>();
    if (p.n < 0) throw ParseError("n must be nonnegative");
    p.objective = parse_expr(j.value("objective", std::string("0")), p.n);
    for (const Json& bj : j.value("blocks", Json::array())) {
      ProblemBlock blk;
      const std::string kind = bj.at("cone").get<std::string>();
      const int size = bj.at("size").get<int>();
      if (kind == "orthant")
        blk.spec = orthant_block(size);
      else if (kind == "soc")
        blk.spec = soc_block(size);
      else if (kind == "psd")
        blk.spec = psd_block(size);
      else
        throw ParseError("unknown cone kind '" + kind + "'");
      const auto& entries = bj.at("entries");
      const size_t expect = blk.spec.kind == ConeKind::kPsd
                                ? static_cast<size_t>(size) * size
                                : static_cast<size_t>(blk.spec.dim());
      if (entries.size() != expect)
        throw ParseError("block expects " + std::to_string(expect) + " entries, got " +
                         std::to_string(entries.size()));
      for (const Json& e : entries)
        blk.entries.push_back(parse_expr(e.get<std::string>(), p.n));
      if (blk.spec.kind == ConeKind::kPsd) {
        const int k = blk.spec.size;
        for (int r = 0; r < k; ++r)
          for (int c = r + 1; c < k; ++c)
            if (blk.entries[r * k + c].to_string() != blk.entries[c * k + r].to_string()) {
              p.warnings.push_back("psd block entry (" + std::to_string(r + 1) + "," +
                                   std::to_string(c + 1) +
                                   ") differs from its transpose; symmetrizing");
            }
      }
      p.blocks.push_back(std::move(blk));
    }
    for (const Json& e : j.value("equalities", Json::array()))
      p.equalities.push_back(parse_expr(e.get<std::string>(), p.n));
    if (j.contains("face")) p.face = face_from_json(j.at("face"));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("problem json: ") + e.what());
  }
  return p;
}

Json problem_to_json(const ProblemDef& p) {
  Json j;
  j["name"] = p.name;
  j["n"] = p.n;
  j["objective"] = p.objective.to_string();
  j["blocks"] = Json::array();
  for (const ProblemBlock& b : p.blocks) {
    Json bj;
    bj["cone"] = b.spec.kind == ConeKind::kOrthant ? "orthant"
                 : b.spec.kind == ConeKind::kSecondOrder ? "soc"
                                                         : "psd";
    bj["size"] = b.spec.size;
    Json entries = Json::array();
    for (const Expr& e : b.entries) entries.push_back(e.to_string());
    bj["entries"] = entries;
    j["blocks"].push_back(bj);
  }
  if (!p.equalities.empty()) {
    Json eq = Json::array();
    for (const Expr& e : p.equalities) eq.push_back(e.to_string());
    j["equalities"] = eq;
  }
  if (p.face) j["face"] = face_to_json(p.face->cone, p.face->face);
  return j;
}

ProblemDef load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError("json parse error in '" + path + "': " + e.what());
  }
  return problem_from_json(j);
}

void save_problem(const ProblemDef& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write problem file '" + path + "'");
  out << problem_to_json(p).dump(2) << "\n";
}

Json face_to_json(const ConeSpec& cone, const FaceDesc& f) {
  Json j;
  j["blocks"] = Json::array();
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const BlockSpec& spec = cone.block(i);
    const BlockFace& bf = f.blocks[i];
    Json bj;
    switch (spec.kind) {
      case ConeKind::kOrthant: {
        bj["cone"] = "orthant";
        bj["size"] = spec.size;
        Json z = Json::array();
        for (int x : bf.zero_set) z.push_back(x + 1);  // 1-based in files
        bj["zero_set"] = z;
        break;
      }
      case ConeKind::kSecondOrder:
        bj["cone"] = "soc";
        bj["size"] = spec.size;
        bj["tag"] = bf.soc_tag == SocFaceTag::kZero  ? "zero"
                    : bf.soc_tag == SocFaceTag::kRay ? "ray"
                                                     : "full";
        if (bf.soc_tag == SocFaceTag::kRay) {
          Json w = Json::array();
          for (int r = 0; r < bf.ray_tail.size(); ++r) w.push_back(bf.ray_tail[r]);
          bj["w"] = w;
        }
        break;
      case ConeKind::kPsd: {
        bj["cone"] = "psd";
        bj["size"] = spec.size;
        bj["rank"] = static_cast<int>(bf.psd_basis.cols());
        Json rows = Json::array();
        for (int r = 0; r < bf.psd_basis.rows(); ++r) {
          Json row = Json::array();
          for (int c = 0; c < bf.psd_basis.cols(); ++c) row.push_back(bf.psd_basis(r, c));
          rows.push_back(row);
        }
        bj["basis"] = rows;
        break;
      }
    }
    j["blocks"].push_back(bj);
  }
  return j;
}

FaceAnnotation face_from_json(const Json& j) {
  FaceAnnotation out;
  std::vector<BlockSpec> specs;
  std::vector<BlockFace> faces;
  for (const Json& bj : j.at("blocks")) {
    const std::string kind = bj.at("cone").get<std::string>();
    const int size = bj.at("size").get<int>();
    BlockFace bf;
    if (kind == "orthant") {
      specs.push_back(orthant_block(size));
      for (const Json& z : bj.at("zero_set")) {
        const int v = z.get<int>();
        if (v < 1 || v > size) throw ParseError("face zero_set index out of range");
        bf.zero_set.push_back(v - 1);
      }
    } else if (kind == "soc") {
      specs.push_back(soc_block(size));
      const std::string tag = bj.at("tag").get<std::string>();
      if (tag == "zero") {
        bf.soc_tag = SocFaceTag::kZero;
      } else if (tag == "full") {
        bf.soc_tag = SocFaceTag::kFull;
      } else if (tag == "ray") {
        bf.soc_tag = SocFaceTag::kRay;
        const auto& w = bj.at("w");
        bf.ray_tail = Vec(w.size());
        for (size_t r = 0; r < w.size(); ++r) bf.ray_tail[r] = w[r].get<double>();
        const double nn = bf.ray_tail.norm();
        if (std::abs(nn - 1.0) > 1e-6) throw ParseError("soc ray tail not unit");
        bf.ray_tail /= nn;
      } else {
        throw ParseError("unknown soc face tag '" + tag + "'");
      }
    } else if (kind == "psd") {
      specs.push_back(psd_block(size));
      const auto& rows = bj.at("basis");
      const int rank = bj.at("rank").get<int>();
      Mat u(size, rank);
      if (static_cast<int>(rows.size()) != size)
        throw ParseError("psd face basis row count mismatch");
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < rank; ++c) u(r, c) = rows[r][c].get<double>();
      if (rank > 0 && (u.transpose() * u - Mat::Identity(rank, rank)).norm() > 1e-6)
        throw ParseError("psd face basis not orthonormal");
      bf.psd_basis = rank > 0 ? polar_orthonormalize(u) : u;
    } else {
      throw ParseError("unknown face block cone '" + kind + "'");
    }
    faces.push_back(std::move(bf));
  }
  out.cone = ConeSpec(specs);
  out.face.blocks = std::move(faces);
  return out;
}

// ------------------------- evaluation ---------------------------------

VecE eval_G(const ProblemDef& p, const Vec& x) {
  const ConeSpec cone = p.cone();
  VecE g = VecE::Zero(cone.dim());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const ProblemBlock& b = p.blocks[i];
    if (b.spec.kind != ConeKind::kPsd) {
      Vec v(b.spec.dim());
      for (int e = 0; e < b.spec.dim(); ++e) v[e] = b.entries[e].eval(x);
      cone.set_block(g, i, v);
    } else {
      const int k = b.spec.size;
      Mat a(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) a(r, c) = b.entries[r * k + c].eval(x);
      cone.set_block(g, i, svec(Mat(0.5 * (a + a.transpose()))));
    }
  }
  return g;
}

Mat jac_G(const ProblemDef& p, const Vec& x) {
  const ConeSpec cone = p.cone();
  Mat jac = Mat::Zero(cone.dim(), p.n);
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const ProblemBlock& b = p.blocks[i];
    const int off = cone.block_offset(i);
    if (b.spec.kind != ConeKind::kPsd) {
      for (int e = 0; e < b.spec.dim(); ++e) {
        Vec grad;
        b.entries[e].eval_grad(x, nullptr, &grad);
        jac.row(off + e) = grad.transpose();
      }
    } else {
      const int k = b.spec.size;
      std::vector<Vec> grads(static_cast<size_t>(k) * k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          b.entries[r * k + c].eval_grad(x, nullptr, &grads[r * k + c]);
      int idx = 0;
      for (int c = 0; c < k; ++c)
        for (int r = c; r < k; ++r, ++idx) {
          const Vec row = (r == c) ? grads[r * k + c]
                                   : Vec((grads[r * k + c] + grads[c * k + r]) / kSqrt2);
          jac.row(off + idx) = row.transpose();
        }
    }
  }
  return jac;
}

VecE hess_G_dir(const ProblemDef& p, const Vec& x, const Vec& d) {
  const ConeSpec cone = p.cone();
  VecE h = VecE::Zero(cone.dim());
  for (int i = 0; i < cone.num_blocks(); ++i) {
    const ProblemBlock& b = p.blocks[i];
    const int off = cone.block_offset(i);
    if (b.spec.kind != ConeKind::kPsd) {
      for (int e = 0; e < b.spec.dim(); ++e) {
        double dd;
        b.entries[e].eval_jet2(x, d, nullptr, nullptr, &dd);
        h[off + e] = dd;
      }
    } else {
      const int k = b.spec.size;
      Mat a(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
          double dd;
          b.entries[r * k + c].eval_jet2(x, d, nullptr, nullptr, &dd);
          a(r, c) = dd;
        }
      cone.set_block(h, i, svec(Mat(0.5 * (a + a.transpose()))));
    }
  }
  return h;
}

double eval_f(const ProblemDef& p, const Vec& x) { return p.objective.eval(x); }

Vec grad_f(const ProblemDef& p, const Vec& x) {
  Vec g;
  p.objective.eval_grad(x, nullptr, &g);
  return g;
}

Mat hess_f(const ProblemDef& p, const Vec& x) {
  Mat h;
  p.objective.eval_hess(x, nullptr, nullptr, &h);
  return h;
}

Vec eval_equalities(const ProblemDef& p, const Vec& x) {
  Vec v(static_cast<int>(p.equalities.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = p.equalities[i].eval(x);
  return v;
}

Mat jac_equalities(const ProblemDef& p, const Vec& x) {
  Mat j(static_cast<int>(p.equalities.size()), p.n);
  for (int i = 0; i < j.rows(); ++i) {
    Vec g;
    p.equalities[i].eval_grad(x, nullptr, &g);
    j.row(i) = g.transpose();
  }
  return j;
}

EvalPoint make_eval_point(const ProblemDef& p, const Vec& x) {
  return {x, eval_G(p, x), jac_G(p, x), grad_f(p, x), hess_f(p, x)};
}

FdReport fd_check(const ProblemDef& p, const Vec& x, double h) {
  if (h <= 0) throw PreconditionError("fd_check: step must be positive");
  FdReport rep;
  auto track = [&rep](double got, double want) {
    const double rel =
        std::abs(got - want) / (1.0 + std::max(std::abs(got), std::abs(want)));
    rep.max_rel_error = std::max(rep.max_rel_error, rel);
  };

  const Mat jac = jac_G(p, x);
  const Vec gf = grad_f(p, x);
  const Mat hf = hess_f(p, x);
  for (int c = 0; c < p.n; ++c) {
    Vec e = Vec::Zero(p.n);
    e[c] = h;
    const VecE fd_col = (eval_G(p, x + e) - eval_G(p, x - e)) / (2 * h);
    for (int r = 0; r < jac.rows(); ++r) track(fd_col[r], jac(r, c));
    track((eval_f(p, x + e) - eval_f(p, x - e)) / (2 * h), gf[c]);
  }

  std::vector<Vec> dirs;
  for (int c = 0; c < p.n; ++c) {
    Vec e = Vec::Zero(p.n);
    e[c] = 1.0;
    dirs.push_back(e);
  }
  if (p.n > 1) dirs.push_back(Vec::Ones(p.n) / std::sqrt(static_cast<double>(p.n)));
  const VecE g0 = eval_G(p, x);
  const double f0 = eval_f(p, x);
  for (const Vec& d : dirs) {
    const VecE fd2 = (eval_G(p, x + h * d) - 2 * g0 + eval_G(p, x - h * d)) / (h * h);
    const VecE exact = hess_G_dir(p, x, d);
    for (int r = 0; r < fd2.size(); ++r) track(fd2[r], exact[r]);
    const double f2 = (eval_f(p, x + h * d) - 2 * f0 + eval_f(p, x - h * d)) / (h * h);
    track(f2, d.dot(hf * d));
  }
  rep.pass = rep.max_rel_error <= 1e-5;
  return rep;
}

}  // namespace conecert
