#include "btq/potential.hpp"

#include "btq/csv.hpp"
#include "btq/kernels.hpp"
#include "btq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace btq {

double empirical_potential(const CMatrix& m, cplx z) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("empirical_potential: bad matrix");
  const CMatrix shifted = m - z * CMatrix::Identity(m.rows(), m.cols());
  return log_abs_det(shifted) / static_cast<double>(m.rows());
}

double empirical_potential(const ToeplitzMatrix& T, const GinibreSample& G, double delta, cplx z) {
  if (G.dim != T.dim) throw std::invalid_argument("empirical_potential: dimensions differ");
  return empirical_potential(T.entries + delta * G.entries, z);
}

double spectral_potential(const SpectrumResult& spec, cplx z) {
  if (spec.eigenvalues.empty()) throw std::invalid_argument("spectral_potential: empty spectrum");
  return kernels::serial::log_potential_atoms(spec.eigenvalues, {z}).front();
}

double limit_potential(const SymbolSpec& f, const PhaseSpace& space, cplx z, const QuadratureGrid& grid) {
  if (f.kind() != space.kind || grid.kind != space.kind)
    throw std::invalid_argument("limit_potential: symbol, space and grid must agree");
  double u = limit_potential_grid(f, grid, {z}).front();
  int resolution = static_cast<int>(std::lround(std::sqrt(grid.points.size() / (space.kind == SpaceKind::SphereCP1 ? 2.0 : 1.0))));
  for (int attempt = 0; !std::isfinite(u) && attempt < 4; ++attempt) {
    ++resolution;
    u = limit_potential_grid(f, liouville_quadrature(space, resolution), {z}).front();
  }
  return u;
}

std::vector<double> limit_potential_grid(const SymbolSpec& f, const QuadratureGrid& grid,
                                         const std::vector<cplx>& probes) {
  return kernels::quadrature_log_potential(sample_principal(f, grid), grid.weights, probes);
}

std::vector<cplx> default_probe_grid(const SymbolSpec& f, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("default_probe_grid: need at least 2x2 probes");
  const Box b = image_bounding_box(f);
  const double cr = 0.5 * (b.re_lo + b.re_hi), ci = 0.5 * (b.im_lo + b.im_hi);
  double hr = 0.5 * (b.re_hi - b.re_lo), hi = 0.5 * (b.im_hi - b.im_lo);
  if (hr < 1e-9) hr = 0.5;
  if (hi < 1e-9) hi = 0.5;
  hr *= 1.5;
  hi *= 1.5;
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(nx * ny));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      out.emplace_back(cr - hr + 2.0 * hr * i / (nx - 1), ci - hi + 2.0 * hi * j / (ny - 1));
  return out;
}

std::vector<cplx> admissible_probes(const std::vector<cplx>& probes, const std::vector<cplx>& eigenvalues,
                                    double min_distance) {
  std::vector<cplx> out;
  for (const auto& z : probes) {
    const bool near = std::any_of(eigenvalues.begin(), eigenvalues.end(),
                                  [&](cplx l) { return std::abs(z - l) < min_distance; });
    if (!near) out.push_back(z);
  }
  return out;
}

std::vector<PotentialRow> potential_cell(const CMatrix& m, int N, std::uint64_t seed,
                                         const std::vector<cplx>& probes, const std::vector<double>& u_lim,
                                         const SpectrumResult& spec, const SweepConfig& config) {
  std::vector<cplx> kept;
  std::vector<double> kept_lim;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const bool near = std::any_of(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                                  [&](cplx l) { return std::abs(probes[i] - l) < config.min_distance; });
    if (!near) {
      kept.push_back(probes[i]);
      kept_lim.push_back(u_lim[i]);
    }
  }
  std::vector<double> u_emp;
  if (config.route == PotentialRoute::Determinant) {
    u_emp = kernels::log_abs_det_probes(m, kept);
    for (auto& v : u_emp) v /= static_cast<double>(m.rows());
  } else {
    u_emp = kernels::log_potential_atoms(spec.eigenvalues, kept);
  }
  std::vector<PotentialRow> rows;
  rows.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    PotentialRow r;
    r.z = kept[i];
    r.N = N;
    r.seed = seed;
    r.u_emp = u_emp[i];
    r.u_lim = kept_lim[i];
    r.deviation = std::isfinite(r.u_emp) ? std::max(std::abs(r.u_emp - r.u_lim), config.floor)
                                         : std::numeric_limits<double>::infinity();
    rows.push_back(r);
  }
  return rows;
}

ConvergenceReport potential_sweep(const SweepConfig& config) {
  if (config.Ns.empty()) throw std::invalid_argument("potential_sweep: empty N list");
  if (config.realizations < 1) throw std::invalid_argument("potential_sweep: need at least one realization");
  const SymbolSpec& f = config.symbol;
  const PhaseSpace space = make_phase_space(f.kind());
  const auto probes = config.probes.empty() ? default_probe_grid(f) : config.probes;
  const auto grid = liouville_quadrature(space, config.quadrature_resolution);
  const auto u_lim = limit_potential_grid(f, grid, probes);

  ConvergenceReport report;
  for (int N : config.Ns) {
    const auto T = quantize(f, N);
    const double delta = config.schedule.delta(N);
    std::map<std::pair<double, double>, std::vector<double>> per_z;
    SweepSummary summary;
    summary.N = N;
    for (int r = 0; r < config.realizations; ++r) {
      const std::uint64_t seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(N),
                                             static_cast<std::uint64_t>(r));
      const auto G = sample_ginibre(T.dim, seed);
      const CMatrix m = T.entries + delta * G.entries;
      const auto spec = eigenvalues(m, {"sweep", delta, seed});
      auto rows = potential_cell(m, N, seed, probes, u_lim, spec, config);
      for (const auto& row : rows) {
        if (std::isfinite(row.u_emp))
          per_z[{row.z.real(), row.z.imag()}].push_back(row.deviation);
        else
          ++summary.singular_probes;
      }
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    std::vector<double> medians;
    for (auto& [z, devs] : per_z) medians.push_back(median(devs));
    summary.probes = static_cast<int>(medians.size());
    summary.median_deviation = median(medians);
    report.summaries.push_back(summary);
  }
  return report;
}

void write_potential_csv(std::ostream& os, const std::vector<PotentialRow>& rows) {
  CsvWriter w(os);
  w.header({"z_re", "z_im", "N", "seed", "U_emp", "U_lim", "deviation"});
  for (const auto& r : rows) w.row(r.z.real(), r.z.imag(), r.N, r.seed, r.u_emp, r.u_lim, r.deviation);
}

} // namespace btq
