#include "doctest.h"

#include "btq/quantize.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace btq;

namespace {
double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }
} // namespace

TEST_SUITE("quantize") {

TEST_CASE("scottish flag matrix") {
  for (int N : {8, 50}) {
    const auto t = quantize(*named_symbol("scottish-flag"), N);
    CMatrix expect = CMatrix::Zero(N, N);
    for (int k = 0; k < N; ++k) {
      expect(k, k) = std::cos(2 * std::numbers::pi * (k + 1) / N);
      expect((k + 1) % N, k) = cplx(0, 0.5);
      expect(k, (k + 1) % N) = cplx(0, 0.5);
    }
    CHECK(max_abs_diff(t.entries, expect) <= 1e-12);
  }
}

TEST_CASE("torus modes match explicit clock and shift products") {
  const int N = 9;
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {-2, 3}, {3, -1}, {0, 0}}) {
    const auto t = quantize(SymbolSpec::torus_mode(m, n), N);
    CHECK(max_abs_diff(t.entries, oracle::torus_mode_matrix(N, m, n)) <= 1e-13);
  }
}

TEST_CASE("torus quantization is a *-map") {
  const auto f = *named_symbol("scottish-flag") + SymbolSpec::torus_mode(2, -1, cplx(0.3, 0.4));
  const auto t = quantize(f, 11), tc = quantize(f.conj(), 11);
  CHECK(max_abs_diff(t.entries.adjoint(), tc.entries) <= 1e-13);
}

TEST_CASE("torus mode bound") {
  CHECK_THROWS_AS(quantize(*named_symbol("x3"), 1), std::invalid_argument);
  CHECK_NOTHROW(quantize(SymbolSpec::torus_mode(2, 0), 5));
  CHECK_THROWS_AS(quantize(SymbolSpec::torus_mode(2, 0), 4), std::invalid_argument);
}

TEST_CASE("sphere x3 is diagonal with entries (N - 2k) / (N + 2)") {
  for (int N : {2, 7, 40}) {
    const auto t = quantize(*named_symbol("x3"), N);
    CHECK(t.dim == N + 1);
    for (int k = 0; k <= N; ++k) {
      CHECK(t.entries(k, k).real() == doctest::Approx(double(N - 2 * k) / (N + 2)).epsilon(1e-14));
      for (int l = 0; l <= N; ++l)
        if (l != k) CHECK(std::abs(t.entries(l, k)) == 0.0);
    }
  }
}

TEST_CASE("sphere x1 at N = 2") {
  const auto t = quantize(SymbolSpec::sphere_monomial(1, 0, 0), 2);
  CHECK(std::abs(t.entries(0, 1) - cplx(std::sqrt(2.0) / 4, 0)) < 1e-15);
  CHECK(std::abs(t.entries(1, 0) - cplx(std::sqrt(2.0) / 4, 0)) < 1e-15);
}

TEST_CASE("sphere matrices agree with direct integration") {
  const std::vector<SymbolSpec> symbols{
      *named_symbol("sphere-fig3"),
      *named_symbol("sphere-fig2"),
      SymbolSpec::sphere_monomial(1, 1, 1, cplx(0.5, -2.0)) + SymbolSpec::sphere_monomial(0, 3, 0),
      SymbolSpec::sphere_monomial(2, 0, 2) + SymbolSpec::sphere_monomial(0, 0, 0, 0.25),
  };
  for (const auto& f : symbols)
    for (int N : {4, 9, 16}) {
      if (2 * f.degree() > N) continue;
      CAPTURE(to_record(f));
      CAPTURE(N);
      CHECK(max_abs_diff(quantize(f, N).entries, oracle::sphere_matrix(f, N)) <= 1e-10);
    }
}

TEST_CASE("sphere corrections enter with weight N^-j") {
  SymbolSpec f = SymbolSpec::sphere_monomial(1, 0, 0);
  f.add_term({0, 0, 1}, 2.0, 1);
  const int N = 10;
  CHECK(max_abs_diff(quantize(f, N).entries, oracle::sphere_matrix(f, N)) <= 1e-10);
  CHECK(max_abs_diff(quantize(f, N).entries,
                     quantize(f.principal_symbol(), N).entries + 0.2 * quantize(*named_symbol("x3"), N).entries) <= 1e-14);
}

TEST_CASE("real symbols give bitwise Hermitian matrices") {
  const auto f = SymbolSpec::sphere_monomial(1, 0, 0) + SymbolSpec::sphere_monomial(0, 1, 2, 3.0) +
                 SymbolSpec::sphere_monomial(2, 1, 0);
  REQUIRE(f.is_real());
  const auto t = quantize(f, 30);
  CHECK(t.entries == CMatrix(t.entries.adjoint()));
}

TEST_CASE("constant one quantizes to the identity") {
  CHECK(quantize(*named_symbol("one-sphere"), 12).entries.isApprox(CMatrix::Identity(13, 13), 1e-14));
  CHECK(quantize(*named_symbol("one-torus"), 12).entries.isApprox(CMatrix::Identity(12, 12), 1e-14));
}

TEST_CASE("sphere degree bound") {
  CHECK_NOTHROW(quantize(SymbolSpec::sphere_monomial(0, 0, 3), 6));
  CHECK_THROWS_AS(quantize(SymbolSpec::sphere_monomial(0, 0, 3), 5), std::invalid_argument);
}

TEST_CASE("dimension law") {
  for (int N = 10; N <= 400; ++N) {
    for (auto kind : {SpaceKind::Torus2, SpaceKind::SphereCP1}) {
      const auto sp = make_phase_space(kind);
      CHECK(std::abs(bergman_dimension(sp, N) - N / (2 * std::numbers::pi) * sp.volume) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("matrix files round-trip bit-exactly") {
  const auto t = quantize(*named_symbol("sphere-fig2"), 13);
  std::stringstream ss;
  write_matrix(ss, t);
  const auto back = read_matrix(ss);
  CHECK(back.entries == t.entries);
  CHECK(back.N == 13);
  CHECK(back.dim == 14);
  CHECK(back.symbol == t.symbol);
  std::stringstream bad("not-a-matrix\n");
  CHECK_THROWS(read_matrix(bad));
}

} // TEST_SUITE
