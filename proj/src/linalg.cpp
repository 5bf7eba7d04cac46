// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include "conecert/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "conecert/errors.hpp"

namespace conecert {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

int svec_dim(int k) { return k * (k + 1) / 2; }

int smat_size(int svdim) {
  int k = static_cast<int>(std::round((std::sqrt(8.0 * svdim + 1.0) - 1.0) / 2.0));
  if (svec_dim(k) != svdim) throw DimensionError("smat: not a triangular dimension");
  return k;
}

Vec svec(const Mat& a) {
  const int k = static_cast<int>(a.rows());
  if (a.cols() != k) throw DimensionError("svec: matrix not square");
  Vec v(svec_dim(k));
  int idx = 0;
  for (int j = 0; j < k; ++j)
    for (int i = j; i < k; ++i) v[idx++] = (i == j) ? a(i, j) : kSqrt2 * 0.5 * (a(i, j) + a(j, i));
  return v;
}

Mat smat(const Vec& v) {
  const int k = smat_size(static_cast<int>(v.size()));
  Mat a(k, k);
  int idx = 0;
  for (int j = 0; j < k; ++j)
    for (int i = j; i < k; ++i) {
      const double x = (i == j) ? v[idx] : v[idx] / kSqrt2;
      a(i, j) = x;
      a(j, i) = x;
      ++idx;
    }
  return a;
}

SymEig sym_eig(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  SymEig out{es.eigenvalues(), es.eigenvectors()};
  for (int c = 0; c < out.vectors.cols(); ++c) {
    const double big = out.vectors.col(c).cwiseAbs().maxCoeff();
    const double gate = 1e-9 * big;
    for (int r = 0; r < out.vectors.rows(); ++r) {
      const double e = out.vectors(r, c);
      if (std::abs(e) > gate) {
        if (e < 0) out.vectors.col(c) = -out.vectors.col(c);
        break;
      }
    }
  }
  return out;
}

double lambda_min(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

int numeric_rank(const Mat& a, double tol_rank) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s[0] < 1e-12) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > tol_rank * s[0]) ++r;
  return r;
}

Mat null_space(const Mat& a, double tol_rank) {
  if (a.size() == 0) return Mat::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int r = 0;
  if (smax >= 1e-12)
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > tol_rank * smax) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}

Mat range_basis(const Mat& a, double tol_rank) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  const Vec& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int r = 0;
  if (smax >= 1e-12)
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > tol_rank * smax) ++r;
  return svd.matrixU().leftCols(r);
}

Mat orth_complement(const Mat& a, int n, double tol_rank) {
  if (a.size() == 0 || a.cols() == 0) return Mat::Identity(n, n);
  if (a.rows() != n) throw DimensionError("orth_complement: row count mismatch");
  return null_space(a.transpose(), tol_rank);
}

Mat polar_orthonormalize(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().size() &&
      svd.singularValues()[svd.singularValues().size() - 1] < 1e-12)
    throw NumericError("polar_orthonormalize: rank deficient input");
  return svd.matrixU() * svd.matrixV().transpose();
}

double subspace_distance(const Mat& u, const Mat& v) {
  const int n = static_cast<int>(u.rows() ? u.rows() : v.rows());
  Mat pu = Mat::Zero(n, n), pv = Mat::Zero(n, n);
  if (u.size()) pu = u * u.transpose();
  if (v.size()) pv = v * v.transpose();
  Eigen::JacobiSVD<Mat> svd(pu - pv);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

Mat columns(const std::vector<Vec>& vs, int n) {
  Mat m(n, static_cast<int>(vs.size()));
  for (int j = 0; j < static_cast<int>(vs.size()); ++j) {
    if (vs[j].size() != n) throw DimensionError("columns: vector length mismatch");
    m.col(j) = vs[j];
  }
  return m;
}

LstSqResult least_squares(const Mat& a, const Vec& b) {
  if (a.cols() == 0) return {Vec::Zero(0), b.norm()};
  Vec x = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  return {x, (a * x - b).norm()};
}

double loglog_slope(const std::vector<double>& t, const std::vector<double>& y,
                    double floor_value) {
  std::vector<double> lt, ly;
  for (size_t i = 0; i < t.size(); ++i) {
    if (y[i] > floor_value) {
      lt.push_back(std::log(t[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lt.size() < 2) return std::numeric_limits<double>::infinity();
  double mt = 0, my = 0;
  for (size_t i = 0; i < lt.size(); ++i) {
    mt += lt[i];
    my += ly[i];
  }
  mt /= lt.size();
  my /= ly.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < lt.size(); ++i) {
    num += (lt[i] - mt) * (ly[i] - my);
    den += (lt[i] - mt) * (lt[i] - mt);
  }
  return num / den;
}

}  // namespace conecert
