#pragma once

#include "btq/geometry.hpp"
#include "btq/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace btq {

struct Provenance {
  std::string matrix_id;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  Provenance source;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Full spectrum. Hermitian input (entrywise to 1e-14 relative) goes
/// through the self-adjoint solver, everything else through complex Schur.
SpectrumResult eigenvalues(const CMatrix& m, Provenance source = {});

/// Fraction of eigenvalues with |lambda - center| <= r, for each r.
std::vector<double> empirical_cdf_disks(const SpectrumResult& spec, cplx center,
                                        const std::vector<double>& radii);

struct Disk {
  cplx center;
  double radius = 0;
  bool operator==(const Disk&) const = default;
};
struct Rect {
  double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
  bool operator==(const Rect&) const = default;
};
using Region = std::variant<Disk, Rect>;

bool contains(const Region& r, cplx w);
std::vector<Region> disk_family(cplx center, const std::vector<double>& radii);

struct EmpiricalFractions {
  std::vector<Region> regions;
  std::vector<double> fractions;
};
EmpiricalFractions empirical_fractions(const SpectrumResult& spec, const std::vector<Region>& regions);

struct WeylPrediction {
  std::vector<Region> regions;
  std::vector<double> fractions;
  std::vector<double> stderrs;  // zero for quadrature
};

/// How mu{f0 in region} / vol is evaluated.
struct WeylMethod {
  enum class Kind { Quadrature, MonteCarlo } kind = Kind::MonteCarlo;
  int resolution = 256;          // quadrature
  int samples = 1'000'000;       // Monte-Carlo
  std::uint64_t seed = 0x776579;
};

WeylPrediction weyl_predict(const SymbolSpec& f, const PhaseSpace& space,
                            const std::vector<Region>& regions, const WeylMethod& method = {});

struct WeylComparison {
  double sup_deviation = 0;
  std::vector<double> empirical;
  std::vector<double> predicted;
  std::vector<double> deviation;
};

/// Throws std::invalid_argument when the region families differ.
WeylComparison weyl_compare(const EmpiricalFractions& empirical, const WeylPrediction& predicted);

/// Greedy nearest-neighbour pairing of two spectra; returns the largest
/// paired distance (infinity when sizes differ).
double spectra_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

void write_spectrum_csv(std::ostream& os, const SpectrumResult& spec);

} // namespace btq
