#include "btq/geometry.hpp"

#include "btq/kernels.hpp"
#include "btq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace btq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kManifoldTol = 1e-12;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

cplx eval_coefficients(SpaceKind kind, const Coefficients& coeffs, const Point& p) {
  cplx acc{0.0, 0.0};
  if (kind == SpaceKind::Torus2) {
    const auto& t = std::get<TorusPoint>(p);
    for (const auto& [e, c] : coeffs) {
      const double phase = kTwoPi * (e[0] * t.x + e[1] * t.xi);
      acc += c * cplx(std::cos(phase), std::sin(phase));
    }
  } else {
    const auto& s = std::get<SpherePoint>(p);
    for (const auto& [e, c] : coeffs)
      acc += c * (ipow(s.x1, e[0]) * ipow(s.x2, e[1]) * ipow(s.x3, e[2]));
  }
  return acc;
}

void check_point(SpaceKind kind, const Point& p) {
  if (kind == SpaceKind::Torus2) {
    const auto* t = std::get_if<TorusPoint>(&p);
    if (!t) throw std::domain_error("evaluate_symbol: torus symbol at a sphere point");
    if (!std::isfinite(t->x) || !std::isfinite(t->xi))
      throw std::domain_error("evaluate_symbol: non-finite torus coordinate");
  } else {
    const auto* s = std::get_if<SpherePoint>(&p);
    if (!s) throw std::domain_error("evaluate_symbol: sphere symbol at a torus point");
    const double r2 = s->x1 * s->x1 + s->x2 * s->x2 + s->x3 * s->x3;
    if (!std::isfinite(r2) || std::abs(r2 - 1.0) > kManifoldTol)
      throw std::domain_error("evaluate_symbol: point is off the unit sphere");
  }
}

SpherePoint sphere_point(double x3, double phi) {
  const double r = std::sqrt(std::max(0.0, 1.0 - x3 * x3));
  return {r * std::cos(phi), r * std::sin(phi), x3};
}

} // namespace

std::string to_string(SpaceKind kind) {
  return kind == SpaceKind::Torus2 ? "torus" : "sphere";
}

SpaceKind parse_space_kind(const std::string& tag) {
  if (tag == "torus" || tag == "Torus2" || tag == "T2") return SpaceKind::Torus2;
  if (tag == "sphere" || tag == "SphereCP1" || tag == "CP1") return SpaceKind::SphereCP1;
  throw std::invalid_argument("unknown phase space kind '" + tag + "'");
}

PhaseSpace make_phase_space(SpaceKind kind) {
  // (N / 2 pi) * 2 pi = N, so the section counts N (torus) and N + 1
  // (sphere) are matched to within one.
  PhaseSpace s;
  s.kind = kind;
  s.complex_dimension = 1;
  s.volume = kTwoPi;
  s.quadrature_default = 128;
  return s;
}

// ---------------------------------------------------------------- SymbolSpec

SymbolSpec::SymbolSpec(SpaceKind kind, Coefficients principal)
    : kind_(kind), orders_{std::move(principal)} {
  prune();
}

SymbolSpec SymbolSpec::constant(SpaceKind kind, cplx c) {
  return SymbolSpec(kind, Coefficients{{Exponents{0, 0, 0}, c}});
}

SymbolSpec SymbolSpec::torus_mode(int m, int n, cplx c) {
  return SymbolSpec(SpaceKind::Torus2, Coefficients{{Exponents{m, n, 0}, c}});
}

SymbolSpec SymbolSpec::sphere_monomial(int a, int b, int c, cplx coeff) {
  if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("sphere monomial exponents must be >= 0");
  return SymbolSpec(SpaceKind::SphereCP1, Coefficients{{Exponents{a, b, c}, coeff}});
}

const Coefficients& SymbolSpec::principal() const { return orders_.front(); }

SymbolSpec SymbolSpec::principal_symbol() const { return SymbolSpec(kind_, principal()); }

SymbolSpec& SymbolSpec::add_term(const Exponents& e, cplx c, int order) {
  if (order < 0) throw std::invalid_argument("symbol order must be >= 0");
  if (kind_ == SpaceKind::SphereCP1 && (e[0] < 0 || e[1] < 0 || e[2] < 0))
    throw std::invalid_argument("sphere monomial exponents must be >= 0");
  if (kind_ == SpaceKind::Torus2 && e[2] != 0)
    throw std::invalid_argument("torus modes carry two indices");
  if (orders_.size() <= static_cast<std::size_t>(order)) orders_.resize(static_cast<std::size_t>(order) + 1);
  orders_[static_cast<std::size_t>(order)][e] += c;
  prune();
  return *this;
}

bool SymbolSpec::has_corrections() const { return orders_.size() > 1; }

int SymbolSpec::degree() const {
  int d = 0;
  for (const auto& order : orders_)
    for (const auto& [e, c] : order)
      d = kind_ == SpaceKind::SphereCP1 ? std::max(d, e[0] + e[1] + e[2])
                                        : std::max({d, std::abs(e[0]), std::abs(e[1])});
  return d;
}

bool SymbolSpec::is_real() const {
  for (const auto& order : orders_) {
    for (const auto& [e, c] : order) {
      if (kind_ == SpaceKind::SphereCP1) {
        if (c.imag() != 0.0) return false;
      } else {
        const auto it = order.find(Exponents{-e[0], -e[1], 0});
        const cplx partner = it == order.end() ? cplx{} : it->second;
        if (std::abs(c - std::conj(partner)) > 1e-15 * std::max(1.0, std::abs(c))) return false;
      }
    }
  }
  return true;
}

SymbolSpec SymbolSpec::operator+(const SymbolSpec& o) const {
  if (o.kind_ != kind_) throw std::invalid_argument("symbol kinds differ");
  SymbolSpec r = *this;
  for (std::size_t j = 0; j < o.orders_.size(); ++j)
    for (const auto& [e, c] : o.orders_[j]) r.add_term(e, c, static_cast<int>(j));
  return r;
}

SymbolSpec SymbolSpec::operator-(const SymbolSpec& o) const { return *this + o * cplx(-1.0); }

SymbolSpec SymbolSpec::operator*(cplx s) const {
  SymbolSpec r = *this;
  for (auto& order : r.orders_)
    for (auto& [e, c] : order) c *= s;
  r.prune();
  return r;
}

SymbolSpec operator*(cplx s, const SymbolSpec& f) { return f * s; }

SymbolSpec SymbolSpec::operator*(const SymbolSpec& o) const {
  if (o.kind_ != kind_) throw std::invalid_argument("symbol kinds differ");
  SymbolSpec r;
  r.kind_ = kind_;
  r.orders_.assign(orders_.size() + o.orders_.size() - 1, Coefficients{});
  for (std::size_t i = 0; i < orders_.size(); ++i)
    for (std::size_t j = 0; j < o.orders_.size(); ++j)
      for (const auto& [ea, ca] : orders_[i])
        for (const auto& [eb, cb] : o.orders_[j])
          r.orders_[i + j][Exponents{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
  r.prune();
  return r;
}

SymbolSpec SymbolSpec::conj() const {
  SymbolSpec r;
  r.kind_ = kind_;
  r.orders_.clear();
  for (const auto& order : orders_) {
    Coefficients c2;
    for (const auto& [e, c] : order) {
      if (kind_ == SpaceKind::Torus2)
        c2[Exponents{-e[0], -e[1], 0}] += std::conj(c);
      else
        c2[e] += std::conj(c);
    }
    r.orders_.push_back(std::move(c2));
  }
  r.prune();
  return r;
}

SymbolSpec SymbolSpec::polynomial_of(const std::vector<cplx>& coeffs) const {
  SymbolSpec acc = SymbolSpec::constant(kind_, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * (*this) + SymbolSpec::constant(kind_, *it);
  return acc;
}

void SymbolSpec::prune() {
  if (orders_.empty()) orders_.emplace_back();
  for (auto& order : orders_)
    std::erase_if(order, [](const auto& kv) { return kv.second == cplx(0.0, 0.0); });
  while (orders_.size() > 1 && orders_.back().empty()) orders_.pop_back();
}

std::optional<SymbolSpec> named_symbol(const std::string& name) {
  using SK = SpaceKind;
  if (name == "scottish-flag") {
    // cos(2 pi x) + i cos(2 pi xi)
    SymbolSpec f(SK::Torus2, {});
    f.add_term({1, 0, 0}, 0.5).add_term({-1, 0, 0}, 0.5);
    f.add_term({0, 1, 0}, cplx(0, 0.5)).add_term({0, -1, 0}, cplx(0, 0.5));
    return f;
  }
  if (name == "sphere-fig2") {
    // x1 + 2 x1^2 + i x2
    SymbolSpec f(SK::SphereCP1, {});
    f.add_term({1, 0, 0}, 1.0).add_term({2, 0, 0}, 2.0).add_term({0, 1, 0}, cplx(0, 1));
    return f;
  }
  if (name == "sphere-fig3") {
    // i x1 + x2
    SymbolSpec f(SK::SphereCP1, {});
    f.add_term({1, 0, 0}, cplx(0, 1)).add_term({0, 1, 0}, 1.0);
    return f;
  }
  if (name == "x3") return SymbolSpec::sphere_monomial(0, 0, 1);
  if (name == "one-sphere") return SymbolSpec::constant(SK::SphereCP1, 1.0);
  if (name == "one-torus") return SymbolSpec::constant(SK::Torus2, 1.0);
  return std::nullopt;
}

SymbolSpec parse_symbol(const std::string& text) {
  if (auto named = named_symbol(text)) return *named;
  return from_record(text);
}

cplx evaluate_symbol(const SymbolSpec& f, const Point& p, std::optional<int> N) {
  check_point(f.kind(), p);
  cplx acc = eval_coefficients(f.kind(), f.principal(), p);
  if (N) {
    if (*N < 1) throw std::invalid_argument("evaluate_symbol: N must be >= 1");
    double scale = 1.0;
    for (std::size_t j = 1; j < f.orders().size(); ++j) {
      scale /= static_cast<double>(*N);
      acc += scale * eval_coefficients(f.kind(), f.orders()[j], p);
    }
  }
  return acc;
}

// ---------------------------------------------------------------- quadrature

double QuadratureGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

QuadratureGrid liouville_quadrature(const PhaseSpace& space, int resolution) {
  if (resolution < 2) throw std::invalid_argument("liouville_quadrature: resolution must be >= 2");
  QuadratureGrid g;
  g.kind = space.kind;
  if (space.kind == SpaceKind::SphereCP1) {
    std::vector<double> x, w;
    gauss_legendre(resolution, x, w);
    const int nphi = 2 * resolution;
    g.points.reserve(static_cast<std::size_t>(resolution * nphi));
    g.weights.reserve(static_cast<std::size_t>(resolution * nphi));
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < nphi; ++j) {
        const double phi = kTwoPi * (j + 0.5) / nphi;
        g.points.emplace_back(sphere_point(x[static_cast<std::size_t>(i)], phi));
        g.weights.push_back(space.volume * 0.5 * w[static_cast<std::size_t>(i)] / nphi);
      }
    }
  } else {
    const double w = space.volume / (static_cast<double>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j) {
        g.points.emplace_back(TorusPoint{(i + 0.5) / resolution, (j + 0.5) / resolution});
        g.weights.push_back(w);
      }
  }
  return g;
}

std::vector<cplx> sample_principal(const SymbolSpec& f, const QuadratureGrid& grid) {
  std::vector<cplx> v(grid.points.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eval_coefficients(f.kind(), f.principal(), grid.points[i]);
  return v;
}

cplx average_over(const SymbolSpec& f, const QuadratureGrid& grid) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    acc += grid.weights[i] * eval_coefficients(f.kind(), f.principal(), grid.points[i]);
  return acc / grid.total_weight();
}

Point uniform_point(SpaceKind kind, std::uint64_t seed, std::uint64_t index) {
  if (kind == SpaceKind::SphereCP1) {
    // Archimedes: x3 is uniform on [-1, 1] under the normalized area.
    const auto [u1, u2] = CounterRng(seed, Stream::SphereSample).uniform_pair(index);
    return sphere_point(2.0 * u2 - 1.0, kTwoPi * u1);
  }
  const auto [u1, u2] = CounterRng(seed, Stream::TorusSample).uniform_pair(index);
  return TorusPoint{u1, u2};
}

double sup_abs(const SymbolSpec& f, int resolution) {
  double s = 0.0;
  if (f.kind() == SpaceKind::SphereCP1) {
    const int nth = 2 * resolution, nphi = 4 * resolution;
    for (int i = 0; i <= nth; ++i) {
      const double x3 = std::cos(std::numbers::pi * i / nth);
      for (int j = 0; j < nphi; ++j)
        s = std::max(s, std::abs(eval_coefficients(f.kind(), f.principal(),
                                                   sphere_point(x3, kTwoPi * j / nphi))));
    }
  } else {
    const int n = 2 * resolution;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s = std::max(s, std::abs(eval_coefficients(f.kind(), f.principal(),
                                                   TorusPoint{double(i) / n, double(j) / n})));
  }
  return s;
}

Box image_bounding_box(const SymbolSpec& f, int resolution) {
  const auto grid = liouville_quadrature(make_phase_space(f.kind()), resolution);
  Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& v : sample_principal(f, grid)) {
    b.re_lo = std::min(b.re_lo, v.real());
    b.re_hi = std::max(b.re_hi, v.real());
    b.im_lo = std::min(b.im_lo, v.imag());
    b.im_hi = std::max(b.im_hi, v.imag());
  }
  return b;
}

// -------------------------------------------------------------------- kappa

RegularityEstimate estimate_kappa(const SymbolSpec& f, const std::vector<cplx>& z_grid,
                                  int samples, const std::vector<double>& t_grid,
                                  std::uint64_t seed) {
  if (samples < 10000) throw std::invalid_argument("estimate_kappa: samples must be >= 1e4");
  if (t_grid.size() < 2) throw std::invalid_argument("estimate_kappa: need at least two t values");
  for (double t : t_grid)
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("estimate_kappa: t_grid must lie in (0, 1)");

  std::vector<cplx> values(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    values[static_cast<std::size_t>(i)] =
        eval_coefficients(f.kind(), f.principal(), uniform_point(f.kind(), seed, static_cast<std::uint64_t>(i)));

  const auto pc = kernels::sublevel_counts(values, z_grid, t_grid);

  RegularityEstimate est;
  est.probe_points = z_grid;
  est.t_grid = t_grid;
  double min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t zi = 0; zi < z_grid.size(); ++zi) {
    KappaProbe probe;
    probe.z = z_grid[zi];
    std::vector<double> lx, ly;
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
      const auto count = pc.counts[zi * t_grid.size() + ti];
      const double m = static_cast<double>(count) / samples;
      probe.measure.push_back(m);
      if (count > 0) {
        lx.push_back(std::log(t_grid[ti]));
        ly.push_back(std::log(m));
      }
    }
    if (lx.size() < 2) {
      probe.skipped = true;
    } else {
      const auto fit = fit_line(lx, ly);
      probe.slope = fit.slope;
      probe.fit_residual = fit.rms_residual;
      min_slope = std::min(min_slope, fit.slope);
    }
    est.diagnostics.push_back(std::move(probe));
  }
  // Every probe skipped: kappa = 1.
  est.kappa = std::isfinite(min_slope) ? std::clamp(min_slope, 1e-6, 1.0) : 1.0;
  return est;
}

} // namespace btq
