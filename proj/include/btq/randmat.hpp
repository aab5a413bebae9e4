#pragma once

#include "btq/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace btq {

/// i.i.d. complex Gaussian matrix, E g = 0, E|g|^2 = 1. Entries are a pure
/// function of (seed, row-major index); see CounterRng.
struct GinibreSample {
  int dim = 0;
  std::uint64_t seed = 0;
  CMatrix entries;
};

GinibreSample sample_ginibre(int dim, std::uint64_t seed);

class ScheduleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class DeltaRule {
  None,        // unperturbed, delta = 0
  InverseNd,   // N^{-d}
  Default,     // N^{-d/2 - 2 epsilon}
  Power,       // scale * N^{-power}
};

struct PerturbationSchedule {
  double epsilon = 0.25;
  double c_exponent = 0.5;  // lower edge exp(-N^C)
  int d = 1;
  DeltaRule rule = DeltaRule::Default;
  double scale = 1.0;
  double power = 1.0;

  double delta(int N) const;
  std::string describe() const;
};

DeltaRule parse_delta_rule(const std::string& name);

struct DeltaWindow {
  double lower = 0;
  double upper = 0;
  double delta = 0;
};

/// The open interval (exp(-N^C), N^{-d/2 - epsilon}) and the configured
/// delta(N). Throws ScheduleError unless lower < delta < upper.
DeltaWindow delta_window(int N, const PerturbationSchedule& schedule);

struct TailRow {
  double t = 0;
  int trials = 0;
  int successes = 0;
  double p_hat = 0;
  double stderr_ = 0;
};

struct TailResult {
  std::vector<TailRow> rows;
  /// s_min(B + delta G) / delta per trial, in trial order.
  std::vector<double> scaled_smin;
  int dim = 0;
};

/// Empirical P(s_min(B + delta G) < delta t) per t, one Ginibre draw per
/// trial seeded by kernels::trial_seed(seed, dim, trial).
TailResult smin_tail_experiment(const CMatrix& base, double delta, const std::vector<double>& t_grid,
                                int trials, std::uint64_t seed);

/// Log-log exponent beta of P(s_min / delta < t) ~ a t^beta on
/// [0, t_max]: maximum likelihood for the Weibull law 1 - exp(-a t^beta)
/// with observations above t_max treated as censored.
struct TailExponent {
  double beta = 0;
  double scale = 0;  // a
  int uncensored = 0;
};
TailExponent fit_tail_exponent(const std::vector<double>& scaled_smin, double t_max);

/// The constant C in P(s_min < delta t) <= C N t^2. Fitted value 0.97
/// (acceptance --calibrate-tail, 20000 trials); frozen at twice that,
/// rounded up to a half.
inline constexpr double kTailConstant = 2.0;

/// max over rows of p_hat / (dim t^2).
double tail_bound_ratio(const TailResult& r);

void write_tail_csv(std::ostream& os, const TailResult& r);

} // namespace btq
