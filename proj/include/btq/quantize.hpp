#pragma once

#include "btq/geometry.hpp"
#include "btq/kernels.hpp"
#include "btq/linalg.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace btq {

/// Dense Berezin-Toeplitz matrix T_N f with its provenance.
///
/// Torus: basis e_1..e_N, with D = diag(e^{2 pi i k / N}) and the cyclic
/// shift S e_k = e_{k+1}; e^{2 pi i (m x + n xi)} maps to
/// e^{-pi i m n / N} D^m S^n.
///
/// Sphere: orthonormalized monomial sections z^k / ||z^k||, k = 0..N, in
/// the chart centred at the north pole with weight (1 + |z|^2)^{-N}.
/// Entry (l, k) = <f s_k, s_l>.
struct ToeplitzMatrix {
  PhaseSpace space;
  int N = 0;
  int dim = 0;
  CMatrix entries;
  SymbolSpec symbol;
};

/// N for the torus, N + 1 for the sphere.
int bergman_dimension(const PhaseSpace& space, int N);

ToeplitzMatrix quantize_torus(const SymbolSpec& f, int N);
ToeplitzMatrix quantize_sphere(const SymbolSpec& f, int N);
ToeplitzMatrix quantize(const SymbolSpec& f, int N);

/// The sphere symbol rewritten as terms z^p zbar^q s^alpha (1-s)^beta
/// (orders folded in with weight N^{-j}).
std::vector<kernels::SphereTerm> sphere_terms(const SymbolSpec& f, int N);

/// Text matrix file: a header (kind, N, dim, symbol record) followed by
/// row-major entries as C99 hex floats, so reading back is bit-exact.
void write_matrix(std::ostream& os, const ToeplitzMatrix& t);
ToeplitzMatrix read_matrix(std::istream& is);
void save_matrix(const std::string& path, const ToeplitzMatrix& t);
ToeplitzMatrix load_matrix(const std::string& path);

} // namespace btq
