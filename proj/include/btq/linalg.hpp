#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace btq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Largest singular value (divide-and-conquer SVD, backward stable).
double operator_norm(const CMatrix& m);

/// Singular values in ascending order.
RVector singular_values_ascending(const CMatrix& m);

double smallest_singular_value(const CMatrix& m);

/// log|det M| from partial-pivot LU; returns -infinity when a pivot is
/// exactly zero. The empty matrix has log|det| = 0.
double log_abs_det(const CMatrix& m);

/// Entrywise |M - M^*| <= tol.
bool is_hermitian(const CMatrix& m, double tol = 1e-12);

/// Least-squares line through (x, y); returns slope, intercept, slope
/// standard error and the rms residual of the fit.
struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double rms_residual = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

} // namespace btq
