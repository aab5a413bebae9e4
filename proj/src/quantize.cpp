#include "btq/quantize.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace btq {

namespace {

using TermKey = std::tuple<int, int, int, int>;  // p, q, alpha, beta
using TermPoly = std::map<TermKey, cplx>;

TermPoly multiply(const TermPoly& a, const TermPoly& b) {
  TermPoly r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      const auto& [p1, q1, a1, b1] = ka;
      const auto& [p2, q2, a2, b2] = kb;
      r[{p1 + p2, q1 + q2, a1 + a2, b1 + b2}] += ca * cb;
    }
  return r;
}

TermPoly power(const TermPoly& base, int k) {
  TermPoly r{{{0, 0, 0, 0}, 1.0}};
  for (int i = 0; i < k; ++i) r = multiply(r, base);
  return r;
}

// In the chart z with s = |z|^2/(1+|z|^2):
//   x1 + i x2 = 2 z (1-s),  x1 - i x2 = 2 zbar (1-s),  x3 = (1-s) - s.
// x3 stays in the (s, 1-s) basis: expanding it as 2(1-s) - 1 loses digits
// for high powers.
const TermPoly& x1_poly() {
  static const TermPoly p{{{1, 0, 0, 1}, 1.0}, {{0, 1, 0, 1}, 1.0}};
  return p;
}
const TermPoly& x2_poly() {
  static const TermPoly p{{{1, 0, 0, 1}, cplx(0, -1)}, {{0, 1, 0, 1}, cplx(0, 1)}};
  return p;
}
const TermPoly& x3_poly() {
  static const TermPoly p{{{0, 0, 0, 1}, 1.0}, {{0, 0, 1, 0}, -1.0}};
  return p;
}

} // namespace

int bergman_dimension(const PhaseSpace& space, int N) {
  if (N < 1) throw std::invalid_argument("bergman_dimension: N must be >= 1");
  return space.kind == SpaceKind::SphereCP1 ? N + 1 : N;
}

ToeplitzMatrix quantize_torus(const SymbolSpec& f, int N) {
  if (f.kind() != SpaceKind::Torus2) throw std::invalid_argument("quantize_torus: not a torus symbol");
  if (N < 1) throw std::invalid_argument("quantize_torus: N must be >= 1");
  for (const auto& order : f.orders())
    for (const auto& [e, c] : order)
      if (2 * std::max(std::abs(e[0]), std::abs(e[1])) >= N)
        throw std::invalid_argument("quantize_torus: mode (" + std::to_string(e[0]) + "," +
                                    std::to_string(e[1]) + ") needs N > " +
                                    std::to_string(2 * std::max(std::abs(e[0]), std::abs(e[1]))));

  ToeplitzMatrix t;
  t.space = make_phase_space(SpaceKind::Torus2);
  t.N = N;
  t.dim = N;
  t.symbol = f;
  t.entries = CMatrix::Zero(N, N);
  const double twopi = 2.0 * std::numbers::pi;
  double scale = 1.0;
  for (const auto& order : f.orders()) {
    for (const auto& [e, c] : order) {
      const int m = e[0], n = e[1];
      const double weyl = -std::numbers::pi * m * n / N;
      const cplx coeff = scale * c * cplx(std::cos(weyl), std::sin(weyl));
      for (int col = 0; col < N; ++col) {
        const int row = ((col + n) % N + N) % N;
        // D^m on basis vector e_{row+1}: e^{2 pi i m (row+1) / N}
        const double ph = twopi * static_cast<double>((static_cast<long long>(m) * (row + 1)) % N) / N;
        t.entries(row, col) += coeff * cplx(std::cos(ph), std::sin(ph));
      }
    }
    scale /= N;
  }
  return t;
}

std::vector<kernels::SphereTerm> sphere_terms(const SymbolSpec& f, int N) {
  TermPoly acc;
  double scale = 1.0;
  for (const auto& order : f.orders()) {
    for (const auto& [e, c] : order) {
      TermPoly mono = multiply(multiply(power(x1_poly(), e[0]), power(x2_poly(), e[1])),
                               power(x3_poly(), e[2]));
      for (const auto& [k, v] : mono) acc[k] += scale * c * v;
    }
    scale /= N;
  }
  std::vector<kernels::SphereTerm> terms;
  for (const auto& [k, v] : acc) {
    if (v == cplx(0.0, 0.0)) continue;
    const auto& [p, q, a, b] = k;
    terms.push_back({p, q, a, b, v});
  }
  return terms;
}

ToeplitzMatrix quantize_sphere(const SymbolSpec& f, int N) {
  if (f.kind() != SpaceKind::SphereCP1) throw std::invalid_argument("quantize_sphere: not a sphere symbol");
  if (N < 1) throw std::invalid_argument("quantize_sphere: N must be >= 1");
  if (2 * f.degree() > N)
    throw std::invalid_argument("quantize_sphere: symbol degree " + std::to_string(f.degree()) +
                                " exceeds N/2 = " + std::to_string(N / 2.0));
  ToeplitzMatrix t;
  t.space = make_phase_space(SpaceKind::SphereCP1);
  t.N = N;
  t.dim = N + 1;
  t.symbol = f;
  kernels::fill_sphere_toeplitz(t.entries, N, sphere_terms(f, N));
  return t;
}

ToeplitzMatrix quantize(const SymbolSpec& f, int N) {
  return f.kind() == SpaceKind::Torus2 ? quantize_torus(f, N) : quantize_sphere(f, N);
}

} // namespace btq
