// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace conecert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Scaled symmetric vectorization: off-diagonal entries carry sqrt(2) so that
// svec(A).dot(svec(B)) == trace(A*B). Order: column-major lower triangle.
int svec_dim(int k);
Vec svec(const Mat& a);
Mat smat(const Vec& v);         // inverse of svec; infers k from v.size()
int smat_size(int svdim);       // k such that k(k+1)/2 == svdim

// Symmetric eigendecomposition, eigenvalues ascending, with a deterministic
// sign convention: the first entry of each eigenvector whose magnitude
// exceeds 1e-9 * max|entry| is made positive.
struct SymEig {
  Vec values;
  Mat vectors;  // columns
};
SymEig sym_eig(const Mat& a);

double lambda_min(const Mat& a);

// Numeric rank: number of singular values > tol_rank * sigma_max; matrices
// with sigma_max < 1e-12 have rank 0.
int numeric_rank(const Mat& a, double tol_rank = 1e-8);

// Orthonormal basis of the null space of a (columns), via full SVD.
Mat null_space(const Mat& a, double tol_rank = 1e-8);

// Orthonormal basis of the range of a (columns).
Mat range_basis(const Mat& a, double tol_rank = 1e-8);

// Orthonormal basis of the orthogonal complement of span(cols of a) in R^n.
Mat orth_complement(const Mat& a, int n, double tol_rank = 1e-8);

// Polar-factor orthonormalization: for full column rank m, returns the
// closest matrix with orthonormal columns (smooth in m, fixes m if already
// orthonormal).
Mat polar_orthonormalize(const Mat& m);

// Largest principal-angle distance between the column spans of u and v
// (operator norm of the difference of the orthogonal projectors).
double subspace_distance(const Mat& u, const Mat& v);

// Stacks a list of vectors as matrix columns (n x list.size()).
Mat columns(const std::vector<Vec>& vs, int n);

// Least-squares solve min ||a x - b||; also reports the residual norm.
struct LstSqResult {
  Vec x;
  double residual;
};
LstSqResult least_squares(const Mat& a, const Vec& b);

// Log-log least-squares slope of (t_i, y_i), ignoring y_i <= floor.
// Returns +inf when fewer than 2 usable points remain (vacuously steep).
double loglog_slope(const std::vector<double>& t, const std::vector<double>& y,
                    double floor_value = 1e-14);

}  // namespace conecert
