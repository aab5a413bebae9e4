#pragma once

// Independent reference computations used only by the tests.

#include "btq/geometry.hpp"
#include "btq/linalg.hpp"

namespace oracle {

/// <f s_k, s_l> for the sphere by direct numerical integration: trapezoid
/// in the azimuth (exact for the trigonometric polynomials that occur) and
/// tanh-sinh in s = |z|^2 / (1 + |z|^2). The symbol is evaluated pointwise,
/// so nothing is shared with the closed-form term expansion.
btq::CMatrix sphere_matrix(const btq::SymbolSpec& f, int N);

/// e^{-pi i m n / N} D^m S^n by explicit index loops.
btq::CMatrix torus_mode_matrix(int N, int m, int n);

/// Volume average of log|z - x3| over the sphere: (1/2) int_{-1}^{1} log|z - u| du.
double x3_log_potential(btq::cplx z);

} // namespace oracle
