#pragma once

#include "btq/linalg.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace btq {

enum class SpaceKind { Torus2, SphereCP1 };

std::string to_string(SpaceKind kind);
SpaceKind parse_space_kind(const std::string& tag);

/// A quantizable phase space. The volume is calibrated so that
/// (N / 2 pi) * volume reproduces the holomorphic-section count.
struct PhaseSpace {
  SpaceKind kind = SpaceKind::SphereCP1;
  int complex_dimension = 1;
  double volume = 0.0;
  int quadrature_default = 128;
};

PhaseSpace make_phase_space(SpaceKind kind);

/// Torus coordinates (x, xi), read mod 1.
struct TorusPoint {
  double x = 0;
  double xi = 0;
};

/// Unit-sphere coordinates; north pole (0,0,1) is the origin of the
/// stereographic chart used by the sphere quantization.
struct SpherePoint {
  double x1 = 0;
  double x2 = 0;
  double x3 = 1;
};

using Point = std::variant<TorusPoint, SpherePoint>;

/// Torus: (m, n, 0) is the mode e^{2 pi i (m x + n xi)}.
/// Sphere: (a, b, c) is the monomial x1^a x2^b x3^c.
using Exponents = std::array<int, 3>;
using Coefficients = std::map<Exponents, cplx>;

/// Finite symbol f ~ sum_j N^{-j} f_j. orders[0] is the principal symbol.
class SymbolSpec {
public:
  SymbolSpec() = default;
  SymbolSpec(SpaceKind kind, Coefficients principal);

  static SymbolSpec constant(SpaceKind kind, cplx c);
  /// e^{2 pi i (m x + n xi)}
  static SymbolSpec torus_mode(int m, int n, cplx c = 1.0);
  /// x1^a x2^b x3^c
  static SymbolSpec sphere_monomial(int a, int b, int c, cplx coeff = 1.0);

  SpaceKind kind() const { return kind_; }
  const std::vector<Coefficients>& orders() const { return orders_; }
  const Coefficients& principal() const;
  SymbolSpec principal_symbol() const;

  /// Adds c * N^{-order} * basis(e).
  SymbolSpec& add_term(const Exponents& e, cplx c, int order = 0);

  bool has_corrections() const;
  /// Sphere: total polynomial degree. Torus: max |m|, |n|.
  int degree() const;
  /// Coefficient-level test: real-valued as a function on the space.
  bool is_real() const;

  SymbolSpec operator+(const SymbolSpec& o) const;
  SymbolSpec operator-(const SymbolSpec& o) const;
  SymbolSpec operator*(const SymbolSpec& o) const;
  SymbolSpec operator*(cplx s) const;
  SymbolSpec conj() const;

  /// Polynomial p(f) = sum_k coeffs[k] f^k (Horner, symbol products).
  SymbolSpec polynomial_of(const std::vector<cplx>& coeffs) const;

  bool operator==(const SymbolSpec& o) const = default;

private:
  void prune();

  SpaceKind kind_ = SpaceKind::SphereCP1;
  std::vector<Coefficients> orders_{Coefficients{}};
};

SymbolSpec operator*(cplx s, const SymbolSpec& f);

/// Named symbols used by presets: "scottish-flag", "sphere-fig2",
/// "sphere-fig3", "x3", "one-torus", "one-sphere".
std::optional<SymbolSpec> named_symbol(const std::string& name);

/// Structured text record: `<kind> [order:]e1,e2[,e3]=re,im ...`.
std::string to_record(const SymbolSpec& f);
SymbolSpec from_record(const std::string& record);
/// Accepts either a named symbol or a record.
SymbolSpec parse_symbol(const std::string& text);

/// Principal symbol value, or the full N-dependent value when N is given.
/// Throws std::domain_error for points off the manifold (|x|^2 != 1 beyond
/// 1e-12 on the sphere, non-finite coordinates anywhere).
cplx evaluate_symbol(const SymbolSpec& f, const Point& p,
                     std::optional<int> N = std::nullopt);

struct QuadratureGrid {
  SpaceKind kind = SpaceKind::SphereCP1;
  std::vector<Point> points;
  std::vector<double> weights;

  double total_weight() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Sphere: `resolution` Gauss-Legendre nodes in x3 times 2*resolution
/// uniform azimuths. Torus: resolution x resolution midpoint grid.
/// Weights sum to the calibrated volume.
QuadratureGrid liouville_quadrature(const PhaseSpace& space, int resolution);

/// f0 evaluated at every quadrature node.
std::vector<cplx> sample_principal(const SymbolSpec& f, const QuadratureGrid& grid);

/// Volume-normalized integral of f0 against the grid.
cplx average_over(const SymbolSpec& f, const QuadratureGrid& grid);

/// Uniform (Liouville-distributed) random points, reproducible per seed.
Point uniform_point(SpaceKind kind, std::uint64_t seed, std::uint64_t index);

/// sup |f0| over a dense grid that includes the sphere poles and the torus
/// origin.
double sup_abs(const SymbolSpec& f, int resolution = 256);

struct KappaProbe {
  cplx z;
  bool skipped = false;
  double slope = 0;
  double fit_residual = 0;
  std::vector<double> measure;  // m(z, t) per t
};

struct RegularityEstimate {
  double kappa = 1.0;
  std::vector<cplx> probe_points;
  std::vector<KappaProbe> diagnostics;
  std::vector<double> t_grid;
};

/// Monte-Carlo estimate of m(z,t) = mu{|f0 - z|^2 <= t} / vol, log-log
/// slope per z, minimum over z clamped into (0, 1].
RegularityEstimate estimate_kappa(const SymbolSpec& f, const std::vector<cplx>& z_grid,
                                  int samples, const std::vector<double>& t_grid,
                                  std::uint64_t seed = 0x6b617070ull);

/// Rectangle [re_lo, re_hi] x [im_lo, im_hi] containing f0(X) (sampled).
struct Box {
  double re_lo, re_hi, im_lo, im_hi;
};
Box image_bounding_box(const SymbolSpec& f, int resolution = 128);

} // namespace btq
