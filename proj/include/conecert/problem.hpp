// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "conecert/expr.hpp"
#include "conecert/faces.hpp"

namespace conecert {

using Json = nlohmann::ordered_json;

// One conic constraint block: orthant/soc blocks carry dim() scalar entries,
// psd blocks carry the full k x k matrix of entries row-major (symmetrized on
// evaluation; asymmetric input is recorded as a warning).
struct ProblemBlock {
  BlockSpec spec;
  std::vector<Expr> entries;
};

// Facial-reduction output carries the face the rewrite was posed over; the
// descriptor refers to the pre-rewrite cone, so it travels with its own spec.
struct FaceAnnotation {
  ConeSpec cone;
  FaceDesc face;
};

struct ProblemDef {
  std::string name;
  int n = 0;
  Expr objective;
  std::vector<ProblemBlock> blocks;
  // Facial-reduction output files add equality rows and the face they pose
  // the conic part over; both round-trip through the parser.
  std::vector<Expr> equalities;
  std::optional<FaceAnnotation> face;
  std::vector<std::string> warnings;

  ConeSpec cone() const;
};

ProblemDef problem_from_json(const Json& j);
Json problem_to_json(const ProblemDef& p);
ProblemDef load_problem(const std::string& path);
void save_problem(const ProblemDef& p, const std::string& path);

// Face descriptors serialize with their block specs (sizes embedded) so they
// parse back standalone. Orthant zero sets are 1-based in files.
Json face_to_json(const ConeSpec& cone, const FaceDesc& f);
FaceAnnotation face_from_json(const Json& j);

// Exact derivatives of the block map G and the objective f.
VecE eval_G(const ProblemDef& p, const Vec& x);
Mat jac_G(const ProblemDef& p, const Vec& x);          // dim(E) x n
VecE hess_G_dir(const ProblemDef& p, const Vec& x, const Vec& d);  // D2G(x)[d,d]
double eval_f(const ProblemDef& p, const Vec& x);
Vec grad_f(const ProblemDef& p, const Vec& x);
Mat hess_f(const ProblemDef& p, const Vec& x);

Vec eval_equalities(const ProblemDef& p, const Vec& x);
Mat jac_equalities(const ProblemDef& p, const Vec& x);

// Point with cached first/second-order data.
struct EvalPoint {
  Vec x;
  VecE g;
  Mat dg;
  Vec gradf;
  Mat hessf;
};
EvalPoint make_eval_point(const ProblemDef& p, const Vec& x);

// Central-difference audit of all exact derivatives.
struct FdReport {
  double max_rel_error = 0.0;
  bool pass = false;
};
FdReport fd_check(const ProblemDef& p, const Vec& x, double h);

}  // namespace conecert
