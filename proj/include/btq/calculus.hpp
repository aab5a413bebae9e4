#pragma once

#include "btq/geometry.hpp"
#include "btq/linalg.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace btq {

struct HalvingRatio {
  int N = 0;  // ratio = residual(2N) / residual(N)
  double ratio = 0;
};

struct ResidualCurve {
  std::vector<int> Ns;
  std::vector<double> residuals;
  /// Slope of log residual against log N over strictly positive residuals,
  /// with a two-sigma band and the rms residual of the fit.
  double exponent = 0;
  double exponent_lo = 0;
  double exponent_hi = 0;
  double fit_residual = 0;
  std::vector<HalvingRatio> halving;  // pairs (N, 2N) both in Ns, residual(N) > kZeroResidual
};

inline constexpr double kZeroResidual = 1e-13;

ResidualCurve make_curve(const std::vector<int>& Ns, const std::vector<double>& residuals);

/// |T_N f T_N g - T_N(fg)|
ResidualCurve composition_residual(const SymbolSpec& f, const SymbolSpec& g, const std::vector<int>& Ns);

/// A scalar function with a polynomial surrogate p (power basis) and its
/// sup error on the relevant interval.
struct ScalarFunction {
  std::function<double(double)> fn;
  std::vector<double> poly;
  double sup_error = 0;
};

/// Chebyshev interpolant of fn on [lo, hi] of the given degree, converted to
/// the power basis; sup error measured on a 2001-point grid.
ScalarFunction chebyshev_interpolant(const std::function<double(double)>& fn, int degree, double lo, double hi);

/// Taylor polynomial of exp about 0; sup error on [-radius, radius].
ScalarFunction taylor_exp(int degree, double radius = 1.0);

struct ParametrixResult {
  ResidualCurve product;   // |T_N f T_N g - I|
  ResidualCurve inverse;   // |(T_N f)^{-1} - T_N g|
  double min_symbol = 0;   // min f0 on a dense grid
};

/// g is the surrogate of 1 / f0 as a polynomial in f. Throws
/// std::domain_error unless f is real with min f0 > 0.
ParametrixResult parametrix_residual(const SymbolSpec& f, const ScalarFunction& inverse_approx,
                                     const std::vector<int>& Ns);

/// |chi(T_N f) - T_N(p o f)| with chi(T_N f) from the Hermitian
/// eigendecomposition. Throws std::domain_error when T_N f is not Hermitian.
ResidualCurve functional_calculus_residual(const SymbolSpec& f, const ScalarFunction& chi, const std::vector<int>& Ns);

/// chi applied to a Hermitian matrix through its eigendecomposition.
CMatrix hermitian_function(const CMatrix& m, const std::function<double(double)>& chi);

/// |Tr T_N f - (N / 2 pi)^d integral of f|, the integral by quadrature.
ResidualCurve trace_residual(const SymbolSpec& f, const std::vector<int>& Ns, int resolution = 256);

struct NormRow {
  int N = 0;
  double norm = 0;
  double sup = 0;
};
struct NormCheck {
  std::vector<NormRow> rows;
  bool holds = true;  // norm <= sup + 1e-10 for every row
};
NormCheck norm_bound_check(const SymbolSpec& f, const std::vector<int>& Ns);

void write_residual_csv(std::ostream& os, const ResidualCurve& c);

} // namespace btq
