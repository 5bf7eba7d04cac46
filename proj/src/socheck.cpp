// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/socheck.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "conecert/errors.hpp"
#include "conecert/rng.hpp"

namespace conecert {

std::vector<double> default_curve_times() { return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}; }

namespace {

// One corrected point: Gauss-Newton on r(x) = [<Gbar(x), eta_i>] with
// min-norm steps (SVD pseudo-inverse), starting from the predictor.
struct CorrectorOut {
  Vec x;
  double residual;
  bool ok;
};

CorrectorOut correct(const ReducedProblem& rp, const std::vector<VecE>& perp,
                     const Vec& start, double demand) {
  Vec x = start;
  double best = std::numeric_limits<double>::infinity();
  Vec xbest = x;
  for (int it = 0; it < 40; ++it) {
    const VecE gb = rp.gbar(x);
    Vec r(static_cast<int>(perp.size()));
    for (int i = 0; i < r.size(); ++i) r[i] = perp[i].dot(gb);
    const double rn = r.norm();
    if (rn < best) {
      best = rn;
      xbest = x;
    }
    if (rn <= demand) return {x, rn, true};
    const Mat m = rp.dgbar(x);
    Mat jr(static_cast<int>(perp.size()), static_cast<int>(m.cols()));
    for (int i = 0; i < jr.rows(); ++i) jr.row(i) = (m.transpose() * perp[i]).transpose();
    const Vec step = jr.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(r);
    if (step.norm() < 1e-16) break;
    x -= step;
  }
  return {xbest, best, best <= demand};
}

}  // namespace

TracedCurve trace_curve(const ReducedProblem& rp, const Vec& d, const FaceDesc& f,
                        const std::vector<double>& times, double tol) {
  const std::vector<VecE> perp = face_perp_basis(rp.cone(), f);
  // hypothesis of the curve builder: DGbar(xbar) d lands in span(F)
  const VecE img = rp.dgbar_base() * d;
  for (const VecE& eta : perp)
    if (std::abs(eta.dot(img)) > tol * (1.0 + img.norm()))
      throw PreconditionError("trace_curve: DGbar(xbar) d is not in span(F)");

  TracedCurve out;
  out.direction = d;
  out.times = times;
  double tmin1 = std::numeric_limits<double>::infinity(), tmin2 = tmin1;
  for (double t : times) {
    CorrectorOut co = correct(rp, perp, Vec(rp.xbar() + t * d),
                              std::max(tol * t * t, 1e-14));
    out.points.push_back(co.x);
    out.residuals.push_back(co.residual);
    out.success = out.success && co.ok;
    if (t < tmin1) {
      tmin2 = tmin1;
      tmin1 = t;
    } else if (t < tmin2) {
      tmin2 = t;
    }
  }

  // xi''(0) from symmetric traces at the two smallest times, Richardson
  // extrapolated in t^2; the negative-side traces are internal only.
  auto sym_second = [&](double t) -> Vec {
    CorrectorOut plus = correct(rp, perp, Vec(rp.xbar() + t * d),
                                std::max(tol * t * t, 1e-14));
    CorrectorOut minus = correct(rp, perp, Vec(rp.xbar() - t * d),
                                 std::max(tol * t * t, 1e-14));
    return (plus.x + minus.x - 2 * rp.xbar()) / (t * t);
  };
  if (std::isfinite(tmin1) && std::isfinite(tmin2) && tmin2 > tmin1) {
    const Vec d1 = sym_second(tmin1);
    const Vec d2 = sym_second(tmin2);
    const double rr = (tmin2 / tmin1) * (tmin2 / tmin1);
    out.xi2 = (rr * d1 - d2) / (rr - 1.0);
  } else if (std::isfinite(tmin1)) {
    out.xi2 = sym_second(tmin1);
  } else {
    out.xi2 = Vec::Zero(d.size());
  }
  return out;
}

TangentProbeResult tangent_probe(const ReducedProblem& rp, const FirstOrderData& fod,
                                 int count, std::uint64_t seed, double tol) {
  TangentProbeResult out;
  const int n = rp.problem().n;
  const Mat kernel = null_space(rp.dgbar_base());

  std::vector<Vec> dirs;
  if (fod.ri.d.norm() > 1e-12) dirs.push_back(fod.ri.d / fod.ri.d.norm());
  Rng rng(seed, "tangent-probe");
  int tries = 0;
  while (static_cast<int>(dirs.size()) < count && tries < 10 * count) {
    ++tries;
    if (kernel.cols() == 0) break;
    Vec d = fod.ri.d + 0.3 * std::max(1.0, fod.ri.d.norm()) *
                           (kernel * rng.normal_vec(static_cast<int>(kernel.cols())));
    if (d.norm() < 1e-12) continue;
    dirs.push_back(d / d.norm());
  }
  out.directions = static_cast<int>(dirs.size());
  if (dirs.empty()) {
    out.verdict = Verdict::kHolds;  // L has no usable direction: vacuous
    out.witness = "no nonzero ri(L) direction: tangency is vacuous";
    out.worst_exponent = std::numeric_limits<double>::infinity();
    return out;
  }

  const ConeSpec& orig = rp.original_cone();
  const std::vector<double> times = default_curve_times();
  out.worst_exponent = std::numeric_limits<double>::infinity();
  for (const Vec& d0 : dirs) {
    Vec d = d0;
    TracedCurve curve;
    bool traced = false;
    for (int shrink = 0; shrink < 6 && !traced; ++shrink) {
      try {
        curve = trace_curve(rp, d, fod.f_jminus, times, tol);
        traced = true;
      } catch (const RadiusError&) {
        d /= 4.0;  // stay inside the reduction radius; direction is what matters
      }
    }
    if (!traced) {
      out.verdict = Verdict::kFails;
      out.witness = "curve left the reduction radius for every scaling";
      return out;
    }
    std::vector<double> dist(times.size());
    for (size_t j = 0; j < times.size(); ++j) {
      const VecE g = eval_G(rp.problem(), curve.points[j]);
      dist[j] = (g - project(orig, g)).norm();
      if (dist[j] > 10.0 * std::pow(times[j], 1.5)) {
        out.verdict = Verdict::kFails;
        out.witness = "dist(G(xi(t)), K) = " + std::to_string(dist[j]) + " at t = " +
                      std::to_string(times[j]);
        return out;
      }
    }
    const double expo = loglog_slope(times, dist);
    out.worst_exponent = std::min(out.worst_exponent, expo);
    if (expo < 1.5) {
      out.verdict = Verdict::kFails;
      out.witness = "fitted feasibility exponent " + std::to_string(expo) + " < 1.5";
      return out;
    }
  }
  out.verdict = Verdict::kHolds;
  out.witness = "all sampled ri(L) directions trace feasible curves";
  return out;
}

double ssoc_value(const ReducedProblem& rp, const Vec& d, const VecE& y_original,
                  const Vec& y_reduced) {
  const double quad = d.dot(rp.base().hessf * d);
  const double curv = hess_G_dir(rp.problem(), rp.xbar(), d).dot(y_original);
  return quad + curv - sigma_term(rp, d, y_original, y_reduced);
}

SsocResult ssoc_check(const ReducedProblem& rp, const std::vector<Vec>& multipliers,
                      const std::vector<Vec>& directions, double tol) {
  SsocResult out;
  if (multipliers.empty()) {
    out.verdict = Verdict::kInconclusive;  // not applicable without a multiplier
    return out;
  }
  out.applicable = true;
  out.min_value = std::numeric_limits<double>::infinity();
  out.verdict = Verdict::kHolds;
  if (directions.empty()) {
    out.min_value = 0.0;  // C(xbar) = {0}: holds vacuously
    return out;
  }
  for (size_t mi = 0; mi < multipliers.size(); ++mi) {
    const VecE lifted = lift_multiplier(rp.reduction(), multipliers[mi]);
    for (size_t di = 0; di < directions.size(); ++di) {
      const double v = ssoc_value(rp, directions[di], lifted, multipliers[mi]);
      ++out.grid;
      if (v < out.min_value) {
        out.min_value = v;
        out.argmin_direction = static_cast<int>(di);
        out.argmin_multiplier = static_cast<int>(mi);
      }
    }
  }
  if (out.min_value <
      -tol * (1.0 + directions[static_cast<size_t>(
                        std::max(0, out.argmin_direction))].squaredNorm()))
    out.verdict = Verdict::kFails;
  return out;
}

InvarianceResult invariance_check(const ReducedProblem& rp,
                                  const std::vector<Vec>& multipliers,
                                  const std::vector<Vec>& directions, double tol,
                                  bool strong_crsc_holds, const std::string& scope) {
  InvarianceResult out;
  out.supported = strong_crsc_holds;
  out.scope = scope;
  // count distinct multipliers
  int distinct = 0;
  for (size_t i = 0; i < multipliers.size(); ++i) {
    bool dup = false;
    for (size_t j = 0; j < i; ++j)
      if ((multipliers[i] - multipliers[j]).norm() <= 1e-10) dup = true;
    if (!dup) ++distinct;
  }
  if (distinct < 2) {
    out.verdict = Verdict::kInconclusive;  // nothing to compare
    return out;
  }
  out.verdict = Verdict::kHolds;
  for (const Vec& d : directions) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0;
    for (const Vec& y : multipliers) {
      const double v = ssoc_value(rp, d, lift_multiplier(rp.reduction(), y), y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    const double spread = hi - lo;
    const double mean = sum / static_cast<double>(multipliers.size());
    out.spreads.push_back(spread);
    out.max_spread = std::max(out.max_spread, spread);
    if (spread > tol * (1.0 + std::abs(mean))) out.verdict = Verdict::kFails;
  }
  return out;
}

}  // namespace conecert
