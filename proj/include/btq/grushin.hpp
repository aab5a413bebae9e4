#pragma once

#include "btq/geometry.hpp"
#include "btq/linalg.hpp"
#include "btq/quantize.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace btq {

/// (P - z) e_i = t_i f_i and (P - z)^* f_i = t_i e_i with t ascending.
/// Columns of e and f are the vectors e_i and f_i.
struct SingularTriples {
  RVector t;
  CMatrix e;
  CMatrix f;
  cplx z;
  std::string source;
  CMatrix shifted;  // P - z
};

SingularTriples singular_triples(const CMatrix& P, cplx z, std::string source = {});

/// max_i max(|(P-z) e_i - t_i f_i|, |(P-z)^* f_i - t_i e_i|).
double intertwining_residual(const SingularTriples& s);

struct GrushinParams {
  double rho = 0.25;
  double alpha = 1.0;  // N^{-2 rho}
  int A = 0;           // #{i : t_i^2 <= alpha}
};

/// Throws std::invalid_argument unless 0 < rho < 1/2 and N >= 1.
GrushinParams grushin_params(int N, double rho, const SingularTriples& s);
GrushinParams grushin_params_alpha(double alpha, double rho, const SingularTriples& s);

/// Inverse blocks of the augmented matrix [[P - z, R_-], [R_+, 0]] with
/// R_+ = rows e_i^* (i <= A) and R_- = columns f_i (i <= A).
struct GrushinBlocks {
  CMatrix E;      // dim x dim
  CMatrix Eplus;  // dim x A
  CMatrix Eminus; // A x dim
  CMatrix Emp;    // A x A
};

/// E^0 = sum_{i>A} e_i f_i^* / t_i, E_+ = [e_1..e_A], E_- = [f_1..f_A]^*,
/// E_-+ = -diag(t_1..t_A). `singular` is set when t_{A+1} = 0 (E omitted).
struct ClosedFormInverse {
  GrushinBlocks blocks;
  bool singular = false;
};
ClosedFormInverse closed_form_inverse(const SingularTriples& s, int A);

enum GrushinFlag : unsigned {
  kFlagNone = 0,
  kFlagNeumann = 1u << 0,         // delta |G| (|E| + |E_+|) >= 1
  kFlagIllConditioned = 1u << 1,  // closed-form route used
  kFlagNoAugmentation = 1u << 2,  // A = 0
  kFlagFullAugmentation = 1u << 3,// A = dim, pure E_-+ branch
  kFlagSingular = 1u << 4,        // some determinant was -inf
};
std::string describe_flags(unsigned flags);

struct GrushinSystem {
  CMatrix augmented;  // (dim + A) square
  GrushinBlocks inverse;
  GrushinParams params;
  double delta = 0;
  unsigned flags = kFlagNone;
  double condition_estimate = 1;
  /// |augmented * inverse - I|_max
  double inverse_residual = 0;
};

/// P^delta = P + delta G. With no perturbation G is ignored.
struct Perturbation {
  double delta = 0;
  const CMatrix* G = nullptr;
};

inline constexpr double kConditionLimit = 1e12;

GrushinSystem assemble_grushin(const SingularTriples& s, const GrushinParams& params,
                               const Perturbation& pert = {});

/// The three log-determinants of the Schur identity, each by its own LU.
struct SchurTerms {
  double log_det_shifted = 0;  // log|det(P^delta - z)|
  double log_det_augmented = 0;
  double log_det_emp = 0;
  double residual = 0;  // NaN when a term is -inf
  unsigned flags = kFlagNone;
};
SchurTerms schur_terms(const SingularTriples& s, const GrushinSystem& sys, const Perturbation& pert = {});
double schur_identity_residual(const SingularTriples& s, const GrushinSystem& sys, const Perturbation& pert = {});

struct DiagnosticsB {
  int N = 0;
  cplx z;
  double rho = 0;
  double delta = 0;
  std::uint64_t seed = 0;
  int A = 0;
  int dim = 0;
  double B1 = 0, B2 = 0, B3 = 0;
  double log_det_P = 0;          // sum_{i>A} log t_i
  double log_det_P_delta = 0;    // augmented, perturbed
  double log_det_Emp_delta = 0;
  double log_det_shifted = 0;    // log|det(P^delta - z)|
  double limit_integral = 0;     // volume average of log|z - f0|
  double schur_residual = 0;
  double reassembly_residual = 0;
  /// A / N^{d - min(2 rho kappa, 1 - 2 rho)}
  double count_ratio = 0;
  double count_exponent = 0;
  /// N^{-1} A log(t delta) with t = dim^{-2/d - 1/2}
  double b3_lower = 0;
  double s_A = 0;  // smallest singular value of E_-+^delta (0 when A = 0)
  unsigned flags = kFlagNone;
};

struct BOptions {
  double kappa = 1.0;
  std::uint64_t seed = 0;
};

DiagnosticsB b_diagnostics(const ToeplitzMatrix& T, cplx z, double rho, double delta, const CMatrix* G,
                           const QuadratureGrid& grid, const BOptions& opts = {});

struct CountRow {
  int N = 0;
  int dim = 0;
  int A = 0;
};
struct CountScan {
  std::vector<CountRow> rows;
  double exponent = 0;  // least-squares slope of log A against log N (rows with A > 0)
  double exponent_stderr = 0;
  int fitted_points = 0;
};
CountScan small_eigen_count_scan(const SymbolSpec& f, cplx z, double rho, const std::vector<int>& Ns);

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsB>& rows);

} // namespace btq
