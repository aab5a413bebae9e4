#pragma once

#include "btq/geometry.hpp"
#include "btq/randmat.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace btq {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration, read from JSON. Every object rejects keys it
/// does not know. Schema (all keys optional except symbol and N):
///
///   name           string
///   symbol         named symbol or symbol record
///   space          "sphere" | "torus"; must match the symbol when given
///   N              [int, ...] perturbed sizes
///   unperturbed_N  [int, ...] sizes run once with delta = 0
///   delta          {rule: none|inverse-N|default|power, scale, power, c_exponent}
///   epsilon, rho   reals; gamma real or null (null: half the admissible bound)
///   seed           master seed; realizations: int
///   probes         {nx, ny, points: [[re, im], ...], min_distance}
///   regions        {center: [re, im], radii: [...], count, max_radius}
///   grushin        {probes: [[re, im], ...]}
///   quadrature     int, Liouville quadrature resolution
///   weyl           {method: quadrature|monte-carlo, resolution, samples}
///   kappa          {samples, t_grid: [...], nx, ny}
///   stages         {spectra, cdf, potential, grushin: bool}
///   workers        int (0: OpenMP default); out: string
struct ExperimentConfig {
  std::string name = "experiment";
  std::string symbol;
  std::vector<int> Ns;
  std::vector<int> unperturbed_Ns;
  PerturbationSchedule schedule;
  double rho = 0.2;
  std::optional<double> gamma;
  std::uint64_t master_seed = 1;
  int realizations = 5;

  int probe_nx = 41, probe_ny = 41;
  std::vector<cplx> probe_points;
  double min_distance = 1e-4;

  cplx region_center{0, 0};
  std::vector<double> radii;

  std::vector<cplx> grushin_probes;

  int quadrature = 128;
  bool weyl_quadrature = false;
  int weyl_resolution = 256;
  int weyl_samples = 1'000'000;

  int kappa_samples = 20000;
  std::vector<double> kappa_t_grid{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  int kappa_nx = 5, kappa_ny = 5;

  bool stage_spectra = true;
  bool stage_cdf = true;
  bool stage_potential = true;
  bool stage_grushin = true;

  int workers = 0;
  std::string out = "btq-out";
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON (sorted keys, %.17g reals); its checksum is the config hash.
std::string config_to_json(const ExperimentConfig& c);

/// "scottish-flag-figure1", "sphere-figure2", "sphere-figure3". Full scale
/// uses the figure sizes (N = 1000 / 2000) instead of N = 300.
ExperimentConfig preset_config(const std::string& name, bool full_scale = false);
std::vector<std::string> preset_names();

struct ValidatedConfig {
  ExperimentConfig config;
  SymbolSpec symbol;
  double kappa_hat = 1;
  double gamma = 0;
  double gamma_bound = 0;  // min(eps - rho, 2 rho kappa, 1 - 2 rho)
  std::vector<cplx> probes;
};

/// Throws ConfigError on: empty N list, rho outside (0, min(1/2, eps)),
/// gamma >= gamma_bound, a delta outside its window for some N, bad sizes.
ValidatedConfig validate(const ExperimentConfig& c);

} // namespace btq
