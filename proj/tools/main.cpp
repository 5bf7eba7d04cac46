// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conecert/errors.hpp"
#include "conecert/report.hpp"

namespace {

using namespace conecert;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInconsistent = 3;
constexpr int kExitRefused = 4;

struct RunConfig {
  std::string problem_path;
  std::string point_text;
  std::string point_file;
  double eps = 1e-3;
  int samples = 64;
  int budget = 32;
  std::uint64_t seed = 42;
  double tol_rank = 1e-8;
  double tol_feas = 1e-8;
  std::string json_path;
  std::string out_path;  // reduce: emitted problem file
};

Vec parse_point(const RunConfig& cfg, int n) {
  std::string text = cfg.point_text;
  if (!cfg.point_file.empty()) {
    std::ifstream in(cfg.point_file);
    if (!in) throw ParseError("cannot open point file '" + cfg.point_file + "'");
    std::getline(in, text);
  }
  Vec x = Vec::Zero(n);
  if (text.empty()) return x;
  int idx = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    if (idx >= n) throw ParseError("point has more than n = " + std::to_string(n) + " entries");
    try {
      x[idx++] = std::stod(tok);
    } catch (...) {
      throw ParseError("bad point entry '" + tok + "'");
    }
    pos = comma + 1;
  }
  if (idx != n)
    throw ParseError("point has " + std::to_string(idx) + " entries, expected " +
                     std::to_string(n));
  return x;
}

AnalyzeOptions options_from(const RunConfig& cfg) {
  AnalyzeOptions opt;
  opt.cq.eps = cfg.eps;
  opt.cq.samples = cfg.samples;
  opt.cq.budget = cfg.budget;
  opt.cq.seed = cfg.seed;
  opt.cq.tol_rank = cfg.tol_rank;
  opt.cq.tol_feas = cfg.tol_feas;
  return opt;
}

int check_feasible(const ProblemDef& p, const ConeSpec& cone, const Vec& x,
                   double tol_feas) {
  const VecE g = eval_G(p, x);
  const double tol = tol_feas * (1.0 + g.norm());
  if (contains(cone, g, tol)) return kExitOk;
  std::cerr << "infeasible point: per-block margins\n";
  for (int i = 0; i < cone.num_blocks(); ++i) {
    ConeSpec single(std::vector<BlockSpec>{cone.block(i)});
    std::cerr << "  block " << i + 1 << " (" << to_string(cone.block(i))
              << "): margin " << interior_margin(single, cone.block_of(g, i)) << "\n";
  }
  return kExitInfeasible;
}

int cmd_analyze(const RunConfig& cfg) {
  ProblemDef p = load_problem(cfg.problem_path);
  for (const std::string& w : p.warnings) std::cerr << "warning: " << w << "\n";
  const Vec x = parse_point(cfg, p.n);
  if (int rc = check_feasible(p, p.cone(), x, cfg.tol_feas); rc != kExitOk) return rc;

  AnalyzeResult res = analyze(p, x, options_from(cfg));
  std::cout << report_to_text(res);
  if (!cfg.json_path.empty()) {
    std::ofstream out(cfg.json_path);
    out << report_to_json(res).dump(2) << "\n";
  }
  return res.violations.empty() ? kExitOk : kExitInconsistent;
}

int cmd_reduce(const RunConfig& cfg) {
  ProblemDef p = load_problem(cfg.problem_path);
  const Vec x = parse_point(cfg, p.n);
  std::string out_path = cfg.out_path;
  if (out_path.empty()) {
    std::filesystem::path ip(cfg.problem_path);
    out_path = (ip.parent_path() / (ip.stem().string() + ".reduced.json")).string();
  }

  FacialReductionResult fr;
  Json audit;
  if (problem_is_affine(p, x)) {
    const Mat a = jac_G(p, x);
    const VecE b = eval_G(p, x) - a * x;
    fr = linear_facial_reduction(a, b, p.cone(), cfg.tol_feas);
    fr.reduced_problem.name = p.name + "-fred";
    fr.reduced_problem.objective = p.objective;
    audit["mode"] = "linear";
    audit["slater_margin"] = fr.slater_margin;
    Json pt = Json::array();
    for (int i = 0; i < fr.slater_point.size(); ++i) pt.push_back(fr.slater_point[i]);
    audit["slater_point"] = pt;
  } else {
    if (int rc = check_feasible(p, p.cone(), x, cfg.tol_feas); rc != kExitOk) return rc;
    AnalyzeOptions opt = options_from(cfg);
    ReducedProblem rp(p, x, cfg.tol_feas);
    GammaParams gp;
    FirstOrderData fod = build_first_order(rp, gp);
    ConditionReport crsc = crsc_check(rp, fod, opt.cq);
    FrParams fp;
    fp.eps = cfg.eps;
    fp.samples = std::max(8, cfg.samples / 2);
    fp.seed = cfg.seed;
    fp.tol = cfg.tol_feas;
    fp.crsc_holds = crsc.verdict == Verdict::kHolds;
    fr = nonlinear_facial_reduction(rp, fod, fp);
    audit["mode"] = "nonlinear";
    audit["crsc"] = to_string(crsc.verdict);
    audit["a1"] = fr.audit.a1;
    audit["a2"] = fr.audit.a2;
    audit["a3"] = fr.audit.a3;
    audit["note"] = fr.audit.note;
    audit["ri_margin"] =
        std::isfinite(fr.slater_margin) ? Json(fr.slater_margin) : Json("inf");
  }

  audit["emitted"] = fr.emitted;
  audit["chain_length"] = static_cast<int>(fr.chain.size());
  audit["chain_bound_ok"] = fr.chain_bound_ok;
  if (!fr.emitted) {
    audit["refusal"] = fr.refusal;
    std::cout << "facial reduction refused: " << fr.refusal << "\n";
    if (!cfg.json_path.empty()) {
      std::ofstream out(cfg.json_path);
      out << audit.dump(2) << "\n";
    }
    return kExitRefused;
  }

  save_problem(fr.reduced_problem, out_path);
  std::cout << "facial reduction emitted " << out_path << " (chain length "
            << fr.chain.size() << ")\n";
  if (!cfg.json_path.empty()) {
    std::ofstream out(cfg.json_path);
    out << audit.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_certify(const RunConfig& cfg) {
  std::ifstream in(cfg.problem_path);
  if (!in) throw ParseError("cannot open corpus manifest '" + cfg.problem_path + "'");
  Json manifest;
  try {
    in >> manifest;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("manifest parse error: ") + e.what());
  }
  const std::filesystem::path base =
      std::filesystem::path(cfg.problem_path).parent_path();

  bool all_ok = true;
  std::cout << "instance                    parse  fd  feasible  lemma31  expose  "
               "determinism  implications\n";
  for (const Json& inst : manifest.at("instances")) {
    const std::string file = inst.at("file").get<std::string>();
    std::string row = file;
    row.resize(28, ' ');
    std::cout << row;
    bool ok = true;
    try {
      ProblemDef p = load_problem((base / file).string());
      std::cout << "ok     ";
      Vec x = Vec::Zero(p.n);
      if (inst.contains("point")) {
        const auto& pj = inst.at("point");
        for (size_t i = 0; i < pj.size(); ++i) x[i] = pj[i].get<double>();
      }
      FdReport fd = fd_check(p, x, 1e-5 * (1.0 + x.norm()));
      std::cout << (fd.pass ? "ok  " : "FAIL");
      ok = ok && fd.pass;

      const VecE g = eval_G(p, x);
      const bool feas = contains(p.cone(), g, cfg.tol_feas * (1.0 + g.norm()));
      std::cout << (feas ? "  ok        " : "  FAIL      ");
      ok = ok && feas;
      if (!feas) {
        std::cout << "-        -       -            -\n";
        all_ok = false;
        continue;
      }

      AnalyzeOptions opt = options_from(cfg);
      AnalyzeResult res = analyze(p, x, opt);
      const bool lemma31 = lin_equals_face_probe(*res.rp, res.fod.f_jminus, 1000,
                                                 derive_seed(cfg.seed, "certify"),
                                                 1e-8);
      std::cout << (lemma31 ? "ok       " : "FAIL     ");
      ok = ok && lemma31;

      bool expose_ok = true;
      for (const VecE& s : res.fod.exposing) {
        const double kr = (res.rp->dgbar_base().transpose() * s).norm();
        if (kr > 1e-9 * (1.0 + s.norm())) expose_ok = false;
        if (!polar_contains(res.rp->cone(), s, 1e-8)) expose_ok = false;
      }
      std::cout << (expose_ok ? "ok      " : "FAIL    ");
      ok = ok && expose_ok;

      AnalyzeResult res2 = analyze(p, x, opt);
      const bool det = report_to_json(res).dump() == report_to_json(res2).dump();
      std::cout << (det ? "ok           " : "FAIL         ");
      ok = ok && det;

      const bool impl = res.violations.empty();
      std::cout << (impl ? "ok" : "FAIL");
      ok = ok && impl;
      std::cout << "\n";
    } catch (const ParseError& e) {
      std::cout << "FAIL   (" << e.what() << ")\n";
      throw;  // corrupted corpus file: parse exit code
    } catch (const Error& e) {
      std::cout << "error: " << e.what() << "\n";
      ok = false;
    }
    all_ok = all_ok && ok;
  }
  std::cout << (all_ok ? "certify: PASS\n" : "certify: FAIL\n");
  return all_ok ? kExitOk : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis and facial reduction for nonlinear conic programs"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("problem", cfg.problem_path, "problem file (json)")->required();
    sub->add_option("--point", cfg.point_text, "point as v1,v2,... (default zeros)");
    sub->add_option("--point-file", cfg.point_file, "file with the point");
    sub->add_option("--eps", cfg.eps, "neighborhood radius");
    sub->add_option("--samples", cfg.samples, "sample count");
    sub->add_option("--budget", cfg.budget, "subface sampling budget");
    sub->add_option("--seed", cfg.seed, "root seed");
    sub->add_option("--tol-rank", cfg.tol_rank, "relative rank tolerance");
    sub->add_option("--tol-feas", cfg.tol_feas, "feasibility tolerance");
    sub->add_option("--json", cfg.json_path, "write the json report here");
  };

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "run the full analysis");
  add_common(analyze_cmd);
  CLI::App* reduce_cmd = app.add_subcommand("reduce", "emit the facially reduced problem");
  add_common(reduce_cmd);
  reduce_cmd->add_option("--out", cfg.out_path, "path for the reduced problem file");
  CLI::App* certify_cmd = app.add_subcommand("certify", "run the property suite on a corpus");
  add_common(certify_cmd);

  CLI11_PARSE(app, argc, argv);
  try {
    if (analyze_cmd->parsed()) return cmd_analyze(cfg);
    if (reduce_cmd->parsed()) return cmd_reduce(cfg);
    if (certify_cmd->parsed()) return cmd_certify(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const conecert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return kExitOk;
}
