#include "doctest.h"

#include "btq/randmat.hpp"
#include "btq/rng.hpp"

#include <cmath>
#include <sstream>

using namespace btq;

TEST_SUITE("randmat") {

TEST_CASE("delta rules") {
  PerturbationSchedule s;
  s.rule = DeltaRule::InverseNd;
  CHECK(s.delta(300) == doctest::Approx(1.0 / 300));
  s.rule = DeltaRule::Default;
  s.epsilon = 0.25;
  CHECK(s.delta(100) == doctest::Approx(std::pow(100.0, -1.0)));
  s.rule = DeltaRule::Power;
  s.scale = 2;
  s.power = 0.9;
  CHECK(s.delta(10) == doctest::Approx(2 * std::pow(10.0, -0.9)));
  s.rule = DeltaRule::None;
  CHECK(s.delta(10) == 0.0);
  CHECK(parse_delta_rule("inverse-N") == DeltaRule::InverseNd);
  CHECK_THROWS_AS(parse_delta_rule("sometimes"), std::invalid_argument);
}

TEST_CASE("delta window") {
  PerturbationSchedule s;
  s.rule = DeltaRule::InverseNd;
  const auto w = delta_window(300, s);
  CHECK(w.lower == doctest::Approx(std::exp(-std::sqrt(300.0))));
  CHECK(w.upper == doctest::Approx(std::pow(300.0, -0.75)));
  CHECK(w.delta == doctest::Approx(1.0 / 300));
  s.rule = DeltaRule::Power;
  s.power = 0.5;  // too large
  CHECK_THROWS_AS(delta_window(300, s), ScheduleError);
  s.power = 40;  // below exp(-sqrt N)
  CHECK_THROWS_AS(delta_window(300, s), ScheduleError);
}

TEST_CASE("tail experiment matches the exact complex Ginibre law") {
  // For B = 0, delta = 1: n s_min^2 ~ Exp(1), so P(s_min < t) = 1 - exp(-n t^2).
  const int n = 16;
  const std::vector<double> ts{0.0, 0.05, 0.1, 0.2, 0.3};
  const auto r = smin_tail_experiment(CMatrix::Zero(n, n), 1.0, ts, 2000, 5);
  REQUIRE(r.rows.size() == ts.size());
  CHECK(r.rows[0].successes == 0);
  for (const auto& row : r.rows) {
    const double p = 1 - std::exp(-n * row.t * row.t);
    const double se = std::sqrt(std::max(p * (1 - p), 1e-4) / row.trials);
    CHECK(std::abs(row.p_hat - p) <= 4.5 * se);
  }
  CHECK(r.scaled_smin.size() == 2000);
}

TEST_CASE("tail experiment is deterministic and validates input") {
  const CMatrix b = CMatrix::Identity(8, 8) * 0.1;
  const auto a = smin_tail_experiment(b, 0.01, {0.5}, 100, 3);
  const auto c = smin_tail_experiment(b, 0.01, {0.5}, 100, 3);
  CHECK(a.scaled_smin == c.scaled_smin);
  CHECK_THROWS(smin_tail_experiment(b, 0.01, {0.5}, 99, 3));
  CHECK_THROWS(smin_tail_experiment(b, 0.0, {0.5}, 100, 3));
  CHECK_THROWS(smin_tail_experiment(b, 0.01, {1.0}, 100, 3));
}

TEST_CASE("censored Weibull fit recovers a known shape") {
  // s = (E / a)^(1 / beta), E ~ Exp(1).
  for (double beta : {1.0, 2.0, 3.0}) {
    const double a = 5.0;
    CounterRng rng(77, Stream::Test);
    std::vector<double> s;
    for (int i = 0; i < 20000; ++i) {
      const double e = -std::log(rng.uniform_pair(static_cast<std::uint64_t>(i)).first);
      s.push_back(std::pow(e / a, 1.0 / beta));
    }
    const auto fit = fit_tail_exponent(s, 0.8);
    CHECK(fit.beta == doctest::Approx(beta).epsilon(0.04));
    CHECK(fit.scale == doctest::Approx(a).epsilon(0.1));
  }
  CHECK_THROWS(fit_tail_exponent({0.5, 0.9}, 0.1));
}

TEST_CASE("tail bound ratio and CSV") {
  TailResult r;
  r.dim = 10;
  r.rows = {{0.0, 100, 0, 0.0, 0.0}, {0.1, 100, 5, 0.05, 0.02}, {0.2, 100, 30, 0.3, 0.05}};
  CHECK(tail_bound_ratio(r) == doctest::Approx(0.75));
  std::ostringstream os;
  write_tail_csv(os, r);
  CHECK(os.str().rfind("t,trials,successes,p_hat,stderr\n", 0) == 0);
}

} // TEST_SUITE
