#include "btq/randmat.hpp"

#include "btq/csv.hpp"
#include "btq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace btq {

GinibreSample sample_ginibre(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("sample_ginibre: dim must be >= 1");
  GinibreSample g;
  g.dim = dim;
  g.seed = seed;
  g.entries.resize(dim, dim);
  kernels::fill_ginibre(g.entries, seed);
  return g;
}

double PerturbationSchedule::delta(int N) const {
  const double n = static_cast<double>(N);
  switch (rule) {
    case DeltaRule::None: return 0.0;
    case DeltaRule::InverseNd: return std::pow(n, -static_cast<double>(d));
    case DeltaRule::Default: return std::pow(n, -0.5 * d - 2.0 * epsilon);
    case DeltaRule::Power: return scale * std::pow(n, -power);
  }
  return 0.0;
}

std::string PerturbationSchedule::describe() const {
  std::ostringstream os;
  switch (rule) {
    case DeltaRule::None: os << "none"; break;
    case DeltaRule::InverseNd: os << "N^-" << d; break;
    case DeltaRule::Default: os << "N^-(" << 0.5 * d << "+2*" << epsilon << ")"; break;
    case DeltaRule::Power: os << scale << "*N^-" << power; break;
  }
  return os.str();
}

DeltaRule parse_delta_rule(const std::string& name) {
  if (name == "none") return DeltaRule::None;
  if (name == "inverse-N" || name == "inverse-Nd") return DeltaRule::InverseNd;
  if (name == "default") return DeltaRule::Default;
  if (name == "power") return DeltaRule::Power;
  throw std::invalid_argument("unknown delta rule '" + name + "'");
}

DeltaWindow delta_window(int N, const PerturbationSchedule& schedule) {
  if (N < 2) throw std::invalid_argument("delta_window: N must be >= 2");
  const double n = static_cast<double>(N);
  DeltaWindow w;
  w.lower = std::exp(-std::pow(n, schedule.c_exponent));
  w.upper = std::pow(n, -0.5 * schedule.d - schedule.epsilon);
  w.delta = schedule.delta(N);
  if (!(w.lower < w.delta && w.delta < w.upper)) {
    std::ostringstream os;
    os << "delta(" << N << ") = " << w.delta << " for rule " << schedule.describe()
       << " lies outside (" << w.lower << ", " << w.upper << ")";
    throw ScheduleError(os.str());
  }
  return w;
}

TailResult smin_tail_experiment(const CMatrix& base, double delta, const std::vector<double>& t_grid,
                                int trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("smin_tail_experiment: trials must be >= 100");
  if (base.rows() != base.cols() || base.rows() == 0)
    throw std::invalid_argument("smin_tail_experiment: base must be square and nonempty");
  if (!(delta > 0)) throw std::invalid_argument("smin_tail_experiment: delta must be positive");
  for (double t : t_grid)
    if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("smin_tail_experiment: t must lie in [0, 1)");

  TailResult r;
  r.dim = static_cast<int>(base.rows());
  const auto smin = kernels::perturbed_smin(base, delta, seed, trials);
  r.scaled_smin.reserve(smin.size());
  for (double s : smin) r.scaled_smin.push_back(s / delta);
  for (double t : t_grid) {
    TailRow row;
    row.t = t;
    row.trials = trials;
    row.successes = static_cast<int>(std::count_if(smin.begin(), smin.end(),
                                                   [&](double s) { return s < delta * t; }));
    row.p_hat = static_cast<double>(row.successes) / trials;
    row.stderr_ = std::sqrt(row.p_hat * (1.0 - row.p_hat) / trials);
    r.rows.push_back(row);
  }
  return r;
}

TailExponent fit_tail_exponent(const std::vector<double>& scaled_smin, double t_max) {
  std::vector<double> logs;
  int censored = 0;
  for (double s : scaled_smin) {
    if (s < t_max && s > 0.0)
      logs.push_back(std::log(s));
    else
      ++censored;
  }
  TailExponent out;
  out.uncensored = static_cast<int>(logs.size());
  if (logs.size() < 2) throw std::runtime_error("fit_tail_exponent: fewer than two observations below t_max");
  const double k = static_cast<double>(logs.size());
  const double log_tmax = std::log(t_max);
  double sum_logs = 0;
  for (double l : logs) sum_logs += l;

  // Profile likelihood in beta: a = k / S(beta), score
  // k/beta + sum log s - a * dS/dbeta = 0, decreasing in beta.
  auto sums = [&](double beta, double& s, double& ds) {
    s = 0;
    ds = 0;
    for (double l : logs) {
      const double v = std::exp(beta * l);
      s += v;
      ds += v * l;
    }
    const double v = std::exp(beta * log_tmax);
    s += censored * v;
    ds += censored * v * log_tmax;
  };
  auto score = [&](double beta) {
    double s, ds;
    sums(beta, s, ds);
    return k / beta + sum_logs - k * ds / s;
  };
  double lo = 0.05, hi = 20.0;
  if (score(lo) < 0 || score(hi) > 0) throw std::runtime_error("fit_tail_exponent: score has no root in [0.05, 20]");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (score(mid) > 0 ? lo : hi) = mid;
  }
  out.beta = 0.5 * (lo + hi);
  double s, ds;
  sums(out.beta, s, ds);
  out.scale = k / s;
  return out;
}

double tail_bound_ratio(const TailResult& r) {
  double worst = 0;
  for (const auto& row : r.rows)
    if (row.t > 0) worst = std::max(worst, row.p_hat / (r.dim * row.t * row.t));
  return worst;
}

void write_tail_csv(std::ostream& os, const TailResult& r) {
  CsvWriter w(os);
  w.header({"t", "trials", "successes", "p_hat", "stderr"});
  for (const auto& row : r.rows) w.row(row.t, row.trials, row.successes, row.p_hat, row.stderr_);
}

} // namespace btq
