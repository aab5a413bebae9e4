#include "btq/calculus.hpp"

#include "btq/csv.hpp"
#include "btq/parallel.hpp"
#include "btq/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace btq {

ResidualCurve make_curve(const std::vector<int>& Ns, const std::vector<double>& residuals) {
  if (Ns.size() != residuals.size()) throw std::invalid_argument("make_curve: size mismatch");
  ResidualCurve c;
  c.Ns = Ns;
  c.residuals = residuals;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (residuals[i] < 0) throw std::logic_error("make_curve: negative residual");
    if (residuals[i] > kZeroResidual) {
      lx.push_back(std::log(static_cast<double>(Ns[i])));
      ly.push_back(std::log(residuals[i]));
    }
    for (std::size_t j = 0; j < Ns.size(); ++j)
      if (Ns[j] == 2 * Ns[i] && residuals[i] > kZeroResidual) c.halving.push_back({Ns[i], residuals[j] / residuals[i]});
  }
  if (lx.size() >= 2) {
    const auto fit = fit_line(lx, ly);
    c.exponent = fit.slope;
    c.exponent_lo = fit.slope - 2 * fit.slope_stderr;
    c.exponent_hi = fit.slope + 2 * fit.slope_stderr;
    c.fit_residual = fit.rms_residual;
  }
  return c;
}

namespace {

std::vector<double> per_N(const std::vector<int>& Ns, const std::function<double(int)>& fn) {
  std::vector<double> out(Ns.size());
  parallel_for(static_cast<long>(Ns.size()), 0, [&](long i) { out[static_cast<std::size_t>(i)] = fn(Ns[static_cast<std::size_t>(i)]); });
  return out;
}

std::vector<cplx> to_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

} // namespace

ResidualCurve composition_residual(const SymbolSpec& f, const SymbolSpec& g, const std::vector<int>& Ns) {
  if (f.kind() != g.kind()) throw std::invalid_argument("composition_residual: symbols live on different spaces");
  const SymbolSpec fg = f * g;
  return make_curve(Ns, per_N(Ns, [&](int N) {
    const auto tf = quantize(f, N), tg = quantize(g, N), tfg = quantize(fg, N);
    return operator_norm(tf.entries * tg.entries - tfg.entries);
  }));
}

ScalarFunction chebyshev_interpolant(const std::function<double(double)>& fn, int degree, double lo, double hi) {
  if (degree < 0 || !(hi > lo)) throw std::invalid_argument("chebyshev_interpolant: bad degree or interval");
  const int n = degree + 1;
  std::vector<double> node_vals(static_cast<std::size_t>(n)), nodes(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    nodes[j] = std::cos(std::numbers::pi * (j + 0.5) / n);
    node_vals[j] = fn(0.5 * (hi + lo) + 0.5 * (hi - lo) * nodes[j]);
  }
  // Chebyshev coefficients, then T_k in the power basis of u.
  std::vector<double> cu(static_cast<std::size_t>(n), 0.0);
  std::vector<double> tkm1{1.0}, tk{0.0, 1.0};
  for (int k = 0; k < n; ++k) {
    double ck = 0;
    for (int j = 0; j < n; ++j) ck += node_vals[j] * std::cos(k * std::numbers::pi * (j + 0.5) / n);
    ck *= (k == 0 ? 1.0 : 2.0) / n;
    const std::vector<double>& basis = k == 0 ? tkm1 : tk;
    for (std::size_t i = 0; i < basis.size(); ++i) cu[i] += ck * basis[i];
    if (k >= 1) {
      std::vector<double> next(tk.size() + 1, 0.0);
      for (std::size_t i = 0; i < tk.size(); ++i) next[i + 1] += 2 * tk[i];
      for (std::size_t i = 0; i < tkm1.size(); ++i) next[i] -= tkm1[i];
      tkm1 = tk;
      tk = next;
    }
  }
  // u = a s + b.
  const double a = 2.0 / (hi - lo), b = -(hi + lo) / (hi - lo);
  std::vector<double> ps(static_cast<std::size_t>(n), 0.0);
  std::vector<double> power{1.0};  // (a s + b)^k
  for (int k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < power.size(); ++i) ps[i] += cu[k] * power[i];
    std::vector<double> next(power.size() + 1, 0.0);
    for (std::size_t i = 0; i < power.size(); ++i) {
      next[i] += b * power[i];
      next[i + 1] += a * power[i];
    }
    power = next;
  }
  ScalarFunction out{fn, ps, 0.0};
  for (int i = 0; i <= 2000; ++i) {
    const double s = lo + (hi - lo) * i / 2000.0;
    double p = 0;
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) p = p * s + *it;
    out.sup_error = std::max(out.sup_error, std::abs(p - fn(s)));
  }
  return out;
}

ScalarFunction taylor_exp(int degree, double radius) {
  if (degree < 0 || radius <= 0) throw std::invalid_argument("taylor_exp: bad degree or radius");
  ScalarFunction out{[](double s) { return std::exp(s); }, {}, 0.0};
  double c = 1;
  for (int k = 0; k <= degree; ++k) {
    out.poly.push_back(c);
    c /= (k + 1);
  }
  for (int i = 0; i <= 2000; ++i) {
    const double s = -radius + 2 * radius * i / 2000.0;
    double p = 0;
    for (auto it = out.poly.rbegin(); it != out.poly.rend(); ++it) p = p * s + *it;
    out.sup_error = std::max(out.sup_error, std::abs(p - std::exp(s)));
  }
  return out;
}

ParametrixResult parametrix_residual(const SymbolSpec& f, const ScalarFunction& inverse_approx,
                                     const std::vector<int>& Ns) {
  if (!f.is_real()) throw std::domain_error("parametrix_residual: symbol is not real");
  const auto grid = liouville_quadrature(make_phase_space(f.kind()), 128);
  const auto values = sample_principal(f, grid);
  ParametrixResult r;
  r.min_symbol = std::numeric_limits<double>::infinity();
  for (const auto& v : values) r.min_symbol = std::min(r.min_symbol, v.real());
  if (!(r.min_symbol > 0)) throw std::domain_error("parametrix_residual: f0 is not bounded below by a positive constant");
  const SymbolSpec g = f.polynomial_of(to_complex(inverse_approx.poly));
  std::vector<double> prod(Ns.size()), inv(Ns.size());
  parallel_for(static_cast<long>(Ns.size()), 0, [&](long i) {
    const int N = Ns[static_cast<std::size_t>(i)];
    const auto tf = quantize(f, N), tg = quantize(g, N);
    const auto id = CMatrix::Identity(tf.dim, tf.dim);
    prod[static_cast<std::size_t>(i)] = operator_norm(tf.entries * tg.entries - id);
    inv[static_cast<std::size_t>(i)] = operator_norm(tf.entries.partialPivLu().inverse() - tg.entries);
  });
  r.product = make_curve(Ns, prod);
  r.inverse = make_curve(Ns, inv);
  return r;
}

CMatrix hermitian_function(const CMatrix& m, const std::function<double(double)>& chi) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!is_hermitian(m, 1e-12 * scale)) throw std::domain_error("hermitian_function: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_function: eigensolver failed");
  RVector d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = chi(d(i));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

ResidualCurve functional_calculus_residual(const SymbolSpec& f, const ScalarFunction& chi, const std::vector<int>& Ns) {
  if (!f.is_real()) throw std::domain_error("functional_calculus_residual: symbol is not real");
  const SymbolSpec pf = f.polynomial_of(to_complex(chi.poly));
  return make_curve(Ns, per_N(Ns, [&](int N) {
    const auto tf = quantize(f, N), tp = quantize(pf, N);
    return operator_norm(hermitian_function(tf.entries, chi.fn) - tp.entries);
  }));
}

ResidualCurve trace_residual(const SymbolSpec& f, const std::vector<int>& Ns, int resolution) {
  const PhaseSpace space = make_phase_space(f.kind());
  const auto grid = liouville_quadrature(space, resolution);
  return make_curve(Ns, per_N(Ns, [&](int N) {
    const auto t = quantize(f, N);
    // Extended accumulator; f = 1 reproduces the dimension to rounding.
    std::complex<long double> integral = 0;
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const cplx v = evaluate_symbol(f, grid.points[i], N);
      integral += static_cast<long double>(grid.weights[i]) * std::complex<long double>(v.real(), v.imag());
    }
    const long double factor = std::pow(N / (2 * std::numbers::pi_v<long double>), space.complex_dimension);
    const cplx tr = t.entries.trace();
    return static_cast<double>(std::abs(std::complex<long double>(tr.real(), tr.imag()) - factor * integral));
  }));
}

NormCheck norm_bound_check(const SymbolSpec& f, const std::vector<int>& Ns) {
  const double sup = sup_abs(f);
  NormCheck c;
  c.rows.resize(Ns.size());
  parallel_for(static_cast<long>(Ns.size()), 0, [&](long i) {
    const int N = Ns[static_cast<std::size_t>(i)];
    c.rows[static_cast<std::size_t>(i)] = {N, operator_norm(quantize(f, N).entries), sup};
  });
  for (const auto& r : c.rows) c.holds = c.holds && r.norm <= r.sup + 1e-10;
  return c;
}

void write_residual_csv(std::ostream& os, const ResidualCurve& c) {
  CsvWriter w(os);
  w.header({"N", "residual"});
  for (std::size_t i = 0; i < c.Ns.size(); ++i) w.row(c.Ns[i], c.residuals[i]);
}

} // namespace btq
