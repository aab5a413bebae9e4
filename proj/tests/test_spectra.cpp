#include "doctest.h"

#include "btq/quantize.hpp"
#include "btq/randmat.hpp"
#include "btq/spectra.hpp"

#include <cmath>
#include <sstream>

using namespace btq;

TEST_SUITE("spectra") {

TEST_CASE("diagonal and Hermitian inputs") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = cplx(0, 1);
  d(2, 2) = -2;
  auto s = eigenvalues(d, {"diag"});
  CHECK(spectra_distance(s.eigenvalues, {3.0, cplx(0, 1), -2.0}) < 1e-14);
  const auto x3 = quantize(*named_symbol("x3"), 6);
  s = eigenvalues(x3.entries);
  for (const auto& l : s.eigenvalues) CHECK(l.imag() == 0.0);
  CHECK_THROWS_AS(eigenvalues(CMatrix::Zero(2, 3)), std::invalid_argument);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("eigenvalues of a random matrix satisfy the trace and determinant") {
  const auto g = sample_ginibre(40, 3);
  const auto s = eigenvalues(g.entries);
  cplx tr = 0;
  double logdet = 0;
  for (const auto& l : s.eigenvalues) {
    tr += l;
    logdet += std::log(std::abs(l));
  }
  CHECK(std::abs(tr - g.entries.trace()) < 1e-10);
  CHECK(logdet == doctest::Approx(log_abs_det(g.entries)).epsilon(1e-10));
}

TEST_CASE("disk CDF") {
  SpectrumResult s;
  s.eigenvalues = {0.1, cplx(0, 0.5), 0.9, 2.0};
  const auto cdf = empirical_cdf_disks(s, 0.0, {0.0, 0.1, 0.5, 1.0, 3.0});
  CHECK(cdf == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS(empirical_cdf_disks(s, 0.0, {0.5, 0.1}));
  CHECK_THROWS(empirical_cdf_disks(s, 0.0, {-1.0}));
}

TEST_CASE("regions") {
  CHECK(contains(Disk{0.0, 1.0}, cplx(0.6, 0.8)));
  CHECK_FALSE(contains(Disk{0.0, 1.0}, cplx(0.7, 0.8)));
  CHECK(contains(Rect{0, 1, 0, 1}, cplx(0.5, 1.0)));
  CHECK_FALSE(contains(Rect{0, 1, 0, 1}, cplx(0.5, 1.1)));
}

TEST_CASE("weyl prediction for x3 intervals") {
  // x3 is uniform on [-1, 1] under the normalized Liouville measure.
  const auto f = *named_symbol("x3");
  const auto sp = make_phase_space(SpaceKind::SphereCP1);
  const std::vector<Region> regions{Rect{-0.5, 0.5, -1, 1}, Rect{0.0, 2.0, -1, 1}, Disk{0.9, 0.05}};
  WeylMethod q;
  q.kind = WeylMethod::Kind::Quadrature;
  q.resolution = 400;
  const auto pq = weyl_predict(f, sp, regions, q);
  CHECK(pq.fractions[0] == doctest::Approx(0.5).epsilon(0.01));
  CHECK(pq.fractions[1] == doctest::Approx(0.5).epsilon(0.01));
  CHECK(pq.fractions[2] == doctest::Approx(0.05).epsilon(0.05));
  WeylMethod mc;
  mc.samples = 200000;
  const auto pm = weyl_predict(f, sp, regions, mc);
  for (std::size_t i = 0; i < regions.size(); ++i) CHECK(std::abs(pm.fractions[i] - pq.fractions[i]) < 5 * pm.stderrs[i] + 0.005);
}

TEST_CASE("weyl prediction for the disk family of i x1 + x2") {
  const auto f = *named_symbol("sphere-fig3");
  const std::vector<double> radii{0.2, 0.5, 0.8, 0.95};
  WeylMethod mc;
  mc.samples = 400000;
  const auto p = weyl_predict(f, make_phase_space(SpaceKind::SphereCP1), disk_family(0.0, radii), mc);
  for (std::size_t i = 0; i < radii.size(); ++i)
    CHECK(std::abs(p.fractions[i] - (1 - std::sqrt(1 - radii[i] * radii[i]))) < 5 * p.stderrs[i] + 1e-4);
}

TEST_CASE("weyl comparison") {
  SpectrumResult s;
  s.eigenvalues = {0.0, 0.5, 1.5, cplx(0, 3)};
  const auto regions = disk_family(0.0, {1.0, 2.0});
  const auto emp = empirical_fractions(s, regions);
  WeylPrediction p{regions, {0.4, 0.8}, {0, 0}};
  const auto c = weyl_compare(emp, p);
  CHECK(c.sup_deviation == doctest::Approx(0.1));
  WeylPrediction other{disk_family(0.0, {1.0, 3.0}), {0.4, 0.8}, {0, 0}};
  CHECK_THROWS_AS(weyl_compare(emp, other), std::invalid_argument);
}

TEST_CASE("spectrum CSV") {
  SpectrumResult s;
  s.eigenvalues = {cplx(0.1, -2)};
  std::ostringstream os;
  write_spectrum_csv(os, s);
  CHECK(os.str() == "re,im\n0.10000000000000001,-2\n");
}

} // TEST_SUITE
