#include "btq/spectra.hpp"

#include "btq/csv.hpp"
#include "btq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace btq {

SpectrumResult eigenvalues(const CMatrix& m, Provenance source) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  if (!m.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entries in '" + source.matrix_id + "'");
  SpectrumResult r;
  r.source = std::move(source);
  if (m.size() == 0) return r;

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (is_hermitian(m, 1e-14 * scale)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw ConvergenceError("eigenvalues: self-adjoint solver failed for '" + r.source.matrix_id + "'");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r.eigenvalues.emplace_back(es.eigenvalues()(i), 0.0);
    return r;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eigenvalues: complex Schur did not converge for '" + r.source.matrix_id + "'");
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return r;
}

std::vector<double> empirical_cdf_disks(const SpectrumResult& spec, cplx center,
                                        const std::vector<double>& radii) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0) throw std::invalid_argument("empirical_cdf_disks: negative radius");
    if (i && radii[i] < radii[i - 1]) throw std::invalid_argument("empirical_cdf_disks: radii must ascend");
  }
  std::vector<double> dist;
  dist.reserve(spec.eigenvalues.size());
  for (const auto& l : spec.eigenvalues) dist.push_back(std::abs(l - center));
  std::sort(dist.begin(), dist.end());
  std::vector<double> out;
  const double n = static_cast<double>(dist.size());
  for (double r : radii) {
    const auto cnt = std::upper_bound(dist.begin(), dist.end(), r) - dist.begin();
    out.push_back(n > 0 ? static_cast<double>(cnt) / n : 0.0);
  }
  return out;
}

bool contains(const Region& r, cplx w) {
  if (const auto* d = std::get_if<Disk>(&r)) return std::abs(w - d->center) <= d->radius;
  const auto& b = std::get<Rect>(r);
  return w.real() >= b.re_lo && w.real() <= b.re_hi && w.imag() >= b.im_lo && w.imag() <= b.im_hi;
}

std::vector<Region> disk_family(cplx center, const std::vector<double>& radii) {
  std::vector<Region> out;
  for (double r : radii) out.emplace_back(Disk{center, r});
  return out;
}

EmpiricalFractions empirical_fractions(const SpectrumResult& spec, const std::vector<Region>& regions) {
  EmpiricalFractions e;
  e.regions = regions;
  const double n = static_cast<double>(spec.eigenvalues.size());
  for (const auto& r : regions) {
    const auto cnt = std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                                   [&](cplx l) { return contains(r, l); });
    e.fractions.push_back(n > 0 ? static_cast<double>(cnt) / n : 0.0);
  }
  return e;
}

WeylPrediction weyl_predict(const SymbolSpec& f, const PhaseSpace& space,
                            const std::vector<Region>& regions, const WeylMethod& method) {
  if (f.kind() != space.kind) throw std::invalid_argument("weyl_predict: symbol and space differ");
  WeylPrediction p;
  p.regions = regions;
  if (method.kind == WeylMethod::Kind::Quadrature) {
    const auto grid = liouville_quadrature(space, method.resolution);
    const auto values = sample_principal(f, grid);
    const double vol = grid.total_weight();
    for (const auto& r : regions) {
      double acc = 0;
      for (std::size_t i = 0; i < values.size(); ++i)
        if (contains(r, values[i])) acc += grid.weights[i];
      p.fractions.push_back(acc / vol);
      p.stderrs.push_back(0.0);
    }
    return p;
  }
  if (method.samples < 1) throw std::invalid_argument("weyl_predict: samples must be positive");
  std::vector<cplx> values(static_cast<std::size_t>(method.samples));
  const SymbolSpec f0 = f.principal_symbol();
  for (int i = 0; i < method.samples; ++i)
    values[static_cast<std::size_t>(i)] =
        evaluate_symbol(f0, uniform_point(space.kind, method.seed, static_cast<std::uint64_t>(i)));
  const double n = static_cast<double>(method.samples);
  for (const auto& r : regions) {
    const auto cnt = std::count_if(values.begin(), values.end(), [&](cplx v) { return contains(r, v); });
    const double frac = static_cast<double>(cnt) / n;
    p.fractions.push_back(frac);
    p.stderrs.push_back(std::sqrt(frac * (1 - frac) / n));
  }
  return p;
}

WeylComparison weyl_compare(const EmpiricalFractions& empirical, const WeylPrediction& predicted) {
  if (empirical.regions != predicted.regions || empirical.fractions.size() != predicted.fractions.size())
    throw std::invalid_argument("weyl_compare: region families do not match");
  WeylComparison c;
  c.empirical = empirical.fractions;
  c.predicted = predicted.fractions;
  for (std::size_t i = 0; i < c.empirical.size(); ++i) {
    const double d = std::abs(c.empirical[i] - c.predicted[i]);
    c.deviation.push_back(d);
    c.sup_deviation = std::max(c.sup_deviation, d);
  }
  return c;
}

double spectra_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0;
  for (const auto& x : a) {
    std::size_t best = b.size();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& spec) {
  CsvWriter w(os);
  w.header({"re", "im"});
  for (const auto& l : spec.eigenvalues) w.row(l.real(), l.imag());
}

} // namespace btq
