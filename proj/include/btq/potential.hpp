#pragma once

#include "btq/geometry.hpp"
#include "btq/quantize.hpp"
#include "btq/randmat.hpp"
#include "btq/spectra.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace btq {

/// N_dim^{-1} log|det(T + delta G - z)|; -infinity at exact singularity.
double empirical_potential(const ToeplitzMatrix& T, const GinibreSample& G, double delta, cplx z);

/// Same quantity for an already assembled matrix M.
double empirical_potential(const CMatrix& m, cplx z);

/// N_dim^{-1} sum_i log|z - lambda_i|.
double spectral_potential(const SpectrumResult& spec, cplx z);

/// Volume-normalized quadrature of log|z - f0|. A probe hitting a node's
/// image exactly triggers a refined grid.
double limit_potential(const SymbolSpec& f, const PhaseSpace& space, cplx z, const QuadratureGrid& grid);

std::vector<double> limit_potential_grid(const SymbolSpec& f, const QuadratureGrid& grid,
                                         const std::vector<cplx>& probes);

/// nx x ny probes on the bounding box of f0(X) inflated by 50% (degenerate
/// directions get half-width 0.5).
std::vector<cplx> default_probe_grid(const SymbolSpec& f, int nx = 41, int ny = 41);

/// Probes at distance >= min_distance from every eigenvalue.
std::vector<cplx> admissible_probes(const std::vector<cplx>& probes, const std::vector<cplx>& eigenvalues,
                                    double min_distance = 1e-4);

enum class PotentialRoute { Determinant, Eigenvalues };

struct SweepConfig {
  SymbolSpec symbol;
  std::vector<int> Ns;
  PerturbationSchedule schedule;
  std::vector<cplx> probes;  // empty: default_probe_grid
  int realizations = 5;
  std::uint64_t master_seed = 1;
  int quadrature_resolution = 128;
  double min_distance = 1e-4;
  double floor = 1e-12;
  PotentialRoute route = PotentialRoute::Determinant;
};

struct PotentialRow {
  cplx z;
  int N = 0;
  std::uint64_t seed = 0;
  double u_emp = 0;
  double u_lim = 0;
  double deviation = 0;
};

struct SweepSummary {
  int N = 0;
  double median_deviation = 0;  // median over z of the per-z median over seeds
  int probes = 0;               // probes with at least one finite value
  int singular_probes = 0;      // -inf evaluations (excluded from medians)
};

struct ConvergenceReport {
  std::vector<PotentialRow> rows;
  std::vector<SweepSummary> summaries;
};

/// |U_{nu_N} - U_nu| over probes, N and seeds. Realization r at size N is
/// perturbed by the Ginibre sample with seed derive_seed(master, N, r).
ConvergenceReport potential_sweep(const SweepConfig& config);

/// Evaluates one realization's empirical potential on its admissible probes.
std::vector<PotentialRow> potential_cell(const CMatrix& m, int N, std::uint64_t seed,
                                         const std::vector<cplx>& probes, const std::vector<double>& u_lim,
                                         const SpectrumResult& spec, const SweepConfig& config);

void write_potential_csv(std::ostream& os, const std::vector<PotentialRow>& rows);

} // namespace btq
