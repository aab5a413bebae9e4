#include "btq/kernels.hpp"

#include "btq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace btq::kernels {

namespace {

// sum_{m=lo}^{hi} log m, zero when the range is empty.
double log_range(int lo, int hi) {
  double s = 0.0;
  for (int m = std::max(lo, 2); m <= hi; ++m) s += std::log(static_cast<double>(m));
  return s;
}

double pair_sum(double a, double b) { return a < b ? a + b : b + a; }

double log_mean_abs(const std::vector<cplx>& atoms, cplx z) {
  double acc = 0.0;
  for (const auto& a : atoms) acc += std::log(std::abs(z - a));
  return acc / static_cast<double>(atoms.size());
}

double weighted_log(const std::vector<cplx>& values, const std::vector<double>& weights,
                    cplx z) {
  double acc = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += weights[i] * std::log(std::abs(z - values[i]));
    wsum += weights[i];
  }
  return acc / wsum;
}

void fill_column(CMatrix& out, int N, const std::vector<SphereTerm>& terms, int k) {
  for (const auto& t : terms) {
    const int l = k + t.p - t.q;
    if (l < 0 || l > N) continue;
    out(l, k) += t.c * sphere_term_ratio(N, k, l, t);
  }
}

double smin_trial(const CMatrix& base, double delta, std::uint64_t seed, int trial) {
  CMatrix g(base.rows(), base.cols());
  serial::fill_ginibre(g, trial_seed(seed, static_cast<std::uint64_t>(base.rows()), trial));
  return smallest_singular_value(base + delta * g);
}

void count_probe(const std::vector<cplx>& values, cplx z, const std::vector<double>& t_grid,
                 std::uint64_t* row) {
  for (const auto& v : values) {
    const double d2 = std::norm(v - z);
    for (std::size_t j = 0; j < t_grid.size(); ++j)
      if (d2 <= t_grid[j]) ++row[j];
  }
}

} // namespace

double sphere_term_ratio(int N, int k, int l, const SphereTerm& t) {
  const int a = k + t.p + t.alpha;
  const int b = N - k - t.p + t.beta;
  if (b < 0) throw std::logic_error("sphere_term_ratio: exponent below the section range");
  const double head = pair_sum(log_range(k + 1, a), log_range(l + 1, a));
  const double tail = pair_sum(log_range(N - k + 1, b), log_range(N - l + 1, b));
  const double norm = log_range(N + 2, N + t.alpha + t.beta + 1);
  return std::exp(0.5 * (head + tail) - norm);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t dim, int trial) {
  return derive_seed(seed, dim, static_cast<std::uint64_t>(trial));
}

namespace serial {

void fill_ginibre(CMatrix& out, std::uint64_t seed) {
  // Entry (i, j) uses counter index i * cols + j (row-major).
  const CounterRng rng(seed, Stream::Ginibre);
  const Eigen::Index rows = out.rows(), cols = out.cols();
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      out(i, j) = rng.complex_gaussian(static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                                       static_cast<std::uint64_t>(j));
}

void fill_sphere_toeplitz(CMatrix& out, int N, const std::vector<SphereTerm>& terms) {
  out.setZero(N + 1, N + 1);
  for (int k = 0; k <= N; ++k) fill_column(out, N, terms, k);
}

std::vector<double> log_abs_det_probes(const CMatrix& m, const std::vector<cplx>& probes) {
  std::vector<double> out(probes.size());
  const CMatrix eye = CMatrix::Identity(m.rows(), m.cols());
  for (std::size_t i = 0; i < probes.size(); ++i) out[i] = log_abs_det(m - probes[i] * eye);
  return out;
}

std::vector<double> log_potential_atoms(const std::vector<cplx>& atoms,
                                        const std::vector<cplx>& probes) {
  std::vector<double> out(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) out[i] = log_mean_abs(atoms, probes[i]);
  return out;
}

std::vector<double> quadrature_log_potential(const std::vector<cplx>& values,
                                             const std::vector<double>& weights,
                                             const std::vector<cplx>& probes) {
  std::vector<double> out(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) out[i] = weighted_log(values, weights, probes[i]);
  return out;
}

std::vector<double> perturbed_smin(const CMatrix& base, double delta, std::uint64_t seed,
                                   int trials) {
  std::vector<double> out(static_cast<std::size_t>(trials));
  for (int r = 0; r < trials; ++r) out[static_cast<std::size_t>(r)] = smin_trial(base, delta, seed, r);
  return out;
}

ProbeCounts sublevel_counts(const std::vector<cplx>& values, const std::vector<cplx>& probes,
                            const std::vector<double>& t_grid) {
  ProbeCounts pc;
  pc.counts.assign(probes.size() * t_grid.size(), 0);
  for (std::size_t i = 0; i < probes.size(); ++i)
    count_probe(values, probes[i], t_grid, pc.counts.data() + i * t_grid.size());
  return pc;
}

} // namespace serial

namespace omp {

void fill_ginibre(CMatrix& out, std::uint64_t seed) {
  const CounterRng rng(seed, Stream::Ginibre);
  const Eigen::Index rows = out.rows(), cols = out.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      out(i, j) = rng.complex_gaussian(static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                                       static_cast<std::uint64_t>(j));
}

void fill_sphere_toeplitz(CMatrix& out, int N, const std::vector<SphereTerm>& terms) {
  out.setZero(N + 1, N + 1);
#pragma omp parallel for schedule(static)
  for (int k = 0; k <= N; ++k) fill_column(out, N, terms, k);
}

std::vector<double> log_abs_det_probes(const CMatrix& m, const std::vector<cplx>& probes) {
  std::vector<double> out(probes.size());
  const auto n = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel
  {
    const CMatrix eye = CMatrix::Identity(m.rows(), m.cols());
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = log_abs_det(m - probes[static_cast<std::size_t>(i)] * eye);
  }
  return out;
}

std::vector<double> log_potential_atoms(const std::vector<cplx>& atoms,
                                        const std::vector<cplx>& probes) {
  std::vector<double> out(probes.size());
  const auto n = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = log_mean_abs(atoms, probes[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> quadrature_log_potential(const std::vector<cplx>& values,
                                             const std::vector<double>& weights,
                                             const std::vector<cplx>& probes) {
  std::vector<double> out(probes.size());
  const auto n = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = weighted_log(values, weights, probes[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> perturbed_smin(const CMatrix& base, double delta, std::uint64_t seed,
                                   int trials) {
  std::vector<double> out(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < trials; ++r) out[static_cast<std::size_t>(r)] = smin_trial(base, delta, seed, r);
  return out;
}

ProbeCounts sublevel_counts(const std::vector<cplx>& values, const std::vector<cplx>& probes,
                            const std::vector<double>& t_grid) {
  ProbeCounts pc;
  pc.counts.assign(probes.size() * t_grid.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    count_probe(values, probes[static_cast<std::size_t>(i)], t_grid,
                pc.counts.data() + static_cast<std::size_t>(i) * t_grid.size());
  return pc;
}

} // namespace omp

} // namespace btq::kernels
