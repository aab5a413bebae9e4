#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp; the unqualified
// names dispatch to OpenMP. Every kernel maps independent items in parallel
// and reduces in a fixed serial order, so both versions agree bit-for-bit.

#include "btq/linalg.hpp"

#include <cstdint>
#include <vector>

namespace btq::kernels {

/// One term c * z^p zbar^q s^alpha (1-s)^beta of a sphere symbol written in
/// the stereographic chart, where s = |z|^2 / (1 + |z|^2).
struct SphereTerm {
  int p = 0;
  int q = 0;
  int alpha = 0;
  int beta = 0;
  cplx c{0.0, 0.0};
};

/// Matrix element <z^p zbar^q s^alpha (1-s)^beta s_k, s_l> between
/// normalized monomial sections of degree N (l = k + p - q).
double sphere_term_ratio(int N, int k, int l, const SphereTerm& t);

struct ProbeCounts {
  // counts[z_index * t_count + t_index]
  std::vector<std::uint64_t> counts;
};

namespace serial {
void fill_ginibre(CMatrix& out, std::uint64_t seed);
void fill_sphere_toeplitz(CMatrix& out, int N, const std::vector<SphereTerm>& terms);
std::vector<double> log_abs_det_probes(const CMatrix& m, const std::vector<cplx>& probes);
std::vector<double> log_potential_atoms(const std::vector<cplx>& atoms,
                                        const std::vector<cplx>& probes);
std::vector<double> quadrature_log_potential(const std::vector<cplx>& values,
                                             const std::vector<double>& weights,
                                             const std::vector<cplx>& probes);
std::vector<double> perturbed_smin(const CMatrix& base, double delta, std::uint64_t seed,
                                   int trials);
ProbeCounts sublevel_counts(const std::vector<cplx>& values, const std::vector<cplx>& probes,
                            const std::vector<double>& t_grid);
} // namespace serial

namespace omp {
void fill_ginibre(CMatrix& out, std::uint64_t seed);
void fill_sphere_toeplitz(CMatrix& out, int N, const std::vector<SphereTerm>& terms);
std::vector<double> log_abs_det_probes(const CMatrix& m, const std::vector<cplx>& probes);
std::vector<double> log_potential_atoms(const std::vector<cplx>& atoms,
                                        const std::vector<cplx>& probes);
std::vector<double> quadrature_log_potential(const std::vector<cplx>& values,
                                             const std::vector<double>& weights,
                                             const std::vector<cplx>& probes);
std::vector<double> perturbed_smin(const CMatrix& base, double delta, std::uint64_t seed,
                                   int trials);
ProbeCounts sublevel_counts(const std::vector<cplx>& values, const std::vector<cplx>& probes,
                            const std::vector<double>& t_grid);
} // namespace omp

using omp::fill_ginibre;
using omp::fill_sphere_toeplitz;
using omp::log_abs_det_probes;
using omp::log_potential_atoms;
using omp::perturbed_smin;
using omp::quadrature_log_potential;
using omp::sublevel_counts;

/// Seed of trial `trial` in perturbed_smin.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t dim, int trial);

} // namespace btq::kernels
