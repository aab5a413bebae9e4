#include "btq/grushin.hpp"

#include "btq/csv.hpp"
#include "btq/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace btq {

SingularTriples singular_triples(const CMatrix& P, cplx z, std::string source) {
  if (P.rows() != P.cols()) throw std::invalid_argument("singular_triples: matrix not square");
  if (!P.allFinite()) throw std::invalid_argument("singular_triples: non-finite entries");
  const Eigen::Index n = P.rows();
  SingularTriples s;
  s.z = z;
  s.source = std::move(source);
  s.shifted = P - z * CMatrix::Identity(n, n);
  Eigen::BDCSVD<CMatrix> svd(s.shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw std::runtime_error("singular_triples: SVD failed");
  s.t.resize(n);
  s.e.resize(n, n);
  s.f.resize(n, n);
  // Eigen orders singular values descending.
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = n - 1 - i;
    s.t(i) = svd.singularValues()(j);
    s.e.col(i) = svd.matrixV().col(j);
    s.f.col(i) = svd.matrixU().col(j);
  }
  return s;
}

double intertwining_residual(const SingularTriples& s) {
  double worst = 0;
  for (Eigen::Index i = 0; i < s.t.size(); ++i) {
    worst = std::max(worst, (s.shifted * s.e.col(i) - s.t(i) * s.f.col(i)).norm());
    worst = std::max(worst, (s.shifted.adjoint() * s.f.col(i) - s.t(i) * s.e.col(i)).norm());
  }
  return worst;
}

GrushinParams grushin_params_alpha(double alpha, double rho, const SingularTriples& s) {
  if (!(rho > 0 && rho < 0.5)) throw std::invalid_argument("grushin_params: rho must lie in (0, 1/2)");
  GrushinParams p;
  p.rho = rho;
  p.alpha = alpha;
  p.A = static_cast<int>(std::count_if(s.t.data(), s.t.data() + s.t.size(), [&](double t) { return t * t <= alpha; }));
  return p;
}

GrushinParams grushin_params(int N, double rho, const SingularTriples& s) {
  if (N < 1) throw std::invalid_argument("grushin_params: N must be positive");
  if (!(rho > 0 && rho < 0.5)) throw std::invalid_argument("grushin_params: rho must lie in (0, 1/2)");
  return grushin_params_alpha(std::pow(static_cast<double>(N), -2.0 * rho), rho, s);
}

ClosedFormInverse closed_form_inverse(const SingularTriples& s, int A) {
  const Eigen::Index n = s.t.size();
  if (A < 0 || A > n) throw std::invalid_argument("closed_form_inverse: A out of range");
  ClosedFormInverse c;
  auto& b = c.blocks;
  b.E = CMatrix::Zero(n, n);
  if (A < n && s.t(A) == 0.0) {
    c.singular = true;
  } else {
    for (Eigen::Index i = A; i < n; ++i) b.E.noalias() += (s.e.col(i) / s.t(i)) * s.f.col(i).adjoint();
  }
  b.Eplus = s.e.leftCols(A);
  b.Eminus = s.f.leftCols(A).adjoint();
  b.Emp = CMatrix::Zero(A, A);
  for (int i = 0; i < A; ++i) b.Emp(i, i) = -s.t(i);
  return c;
}

std::string describe_flags(unsigned flags) {
  std::string out;
  auto add = [&](unsigned bit, const char* name) {
    if (flags & bit) out += out.empty() ? name : std::string("|") + name;
  };
  add(kFlagNeumann, "neumann");
  add(kFlagIllConditioned, "ill-conditioned");
  add(kFlagNoAugmentation, "no-augmentation");
  add(kFlagFullAugmentation, "full-augmentation");
  add(kFlagSingular, "singular");
  return out.empty() ? "none" : out;
}

namespace {

CMatrix stack_blocks(const GrushinBlocks& b) {
  const Eigen::Index n = b.E.rows(), a = b.Emp.rows();
  CMatrix m(n + a, n + a);
  m.topLeftCorner(n, n) = b.E;
  m.topRightCorner(n, a) = b.Eplus;
  m.bottomLeftCorner(a, n) = b.Eminus;
  m.bottomRightCorner(a, a) = b.Emp;
  return m;
}

GrushinBlocks split_blocks(const CMatrix& m, Eigen::Index n) {
  const Eigen::Index a = m.rows() - n;
  return {m.topLeftCorner(n, n), m.topRightCorner(n, a), m.bottomLeftCorner(a, n), m.bottomRightCorner(a, a)};
}

CMatrix perturbed(const SingularTriples& s, const Perturbation& pert) {
  if (pert.G == nullptr || pert.delta == 0.0) return s.shifted;
  if (pert.G->rows() != s.shifted.rows() || pert.G->cols() != s.shifted.cols())
    throw std::invalid_argument("grushin: perturbation has the wrong shape");
  return s.shifted + pert.delta * *pert.G;
}

} // namespace

GrushinSystem assemble_grushin(const SingularTriples& s, const GrushinParams& params, const Perturbation& pert) {
  const Eigen::Index n = s.t.size();
  const int A = params.A;
  if (A < 0 || A > n) throw std::invalid_argument("assemble_grushin: A out of range");
  GrushinSystem sys;
  sys.params = params;
  sys.delta = pert.G ? pert.delta : 0.0;
  if (A == 0) sys.flags |= kFlagNoAugmentation;
  if (A == n) sys.flags |= kFlagFullAugmentation;

  sys.augmented = CMatrix::Zero(n + A, n + A);
  sys.augmented.topLeftCorner(n, n) = perturbed(s, pert);
  sys.augmented.topRightCorner(n, A) = s.f.leftCols(A);
  sys.augmented.bottomLeftCorner(A, n) = s.e.leftCols(A).adjoint();

  const auto closed = closed_form_inverse(s, A);
  if (sys.delta != 0.0 && !closed.singular) {
    const double norm_e = n > A ? 1.0 / s.t(A) : 0.0;
    const double norm_eplus = A > 0 ? 1.0 : 0.0;
    if (sys.delta * operator_norm(*pert.G) * (norm_e + norm_eplus) >= 1.0) sys.flags |= kFlagNeumann;
  }

  Eigen::PartialPivLU<CMatrix> lu(sys.augmented);
  const double rc = lu.rcond();
  sys.condition_estimate = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  CMatrix inv;
  if (sys.condition_estimate > kConditionLimit && !closed.singular) {
    sys.flags |= kFlagIllConditioned;
    const CMatrix e0 = stack_blocks(closed.blocks);
    if (sys.delta == 0.0) {
      inv = e0;
    } else {
      CMatrix delta_block = CMatrix::Zero(n + A, n + A);
      delta_block.topLeftCorner(n, n) = sys.delta * *pert.G;
      const CMatrix k = CMatrix::Identity(n + A, n + A) + delta_block * e0;
      inv = e0 * k.partialPivLu().inverse();
    }
  } else {
    inv = lu.inverse();
  }
  sys.inverse = split_blocks(inv, n);
  sys.inverse_residual =
      (sys.augmented * inv - CMatrix::Identity(n + A, n + A)).cwiseAbs().maxCoeff();
  return sys;
}

SchurTerms schur_terms(const SingularTriples& s, const GrushinSystem& sys, const Perturbation& pert) {
  SchurTerms st;
  st.log_det_shifted = log_abs_det(perturbed(s, pert));
  st.log_det_augmented = log_abs_det(sys.augmented);
  st.log_det_emp = log_abs_det(sys.inverse.Emp);
  if (!std::isfinite(st.log_det_shifted) || !std::isfinite(st.log_det_augmented) ||
      !std::isfinite(st.log_det_emp)) {
    st.flags |= kFlagSingular;
    st.residual = std::numeric_limits<double>::quiet_NaN();
  } else {
    st.residual = std::abs(st.log_det_shifted - st.log_det_augmented - st.log_det_emp);
  }
  return st;
}

double schur_identity_residual(const SingularTriples& s, const GrushinSystem& sys, const Perturbation& pert) {
  return schur_terms(s, sys, pert).residual;
}

DiagnosticsB b_diagnostics(const ToeplitzMatrix& T, cplx z, double rho, double delta, const CMatrix* G,
                           const QuadratureGrid& grid, const BOptions& opts) {
  const auto s = singular_triples(T.entries, z, "T_N");
  const auto params = grushin_params(T.N, rho, s);
  const Perturbation pert{delta, G};
  const auto sys = assemble_grushin(s, params, pert);
  const auto st = schur_terms(s, sys, pert);

  DiagnosticsB d;
  d.N = T.N;
  d.z = z;
  d.rho = rho;
  d.delta = G ? delta : 0.0;
  d.seed = opts.seed;
  d.A = params.A;
  d.dim = T.dim;
  d.flags = sys.flags | st.flags;
  const double n = static_cast<double>(T.dim);

  d.log_det_P = 0;
  for (Eigen::Index i = params.A; i < s.t.size(); ++i) d.log_det_P += std::log(s.t(i));
  if (!std::isfinite(d.log_det_P)) d.flags |= kFlagSingular;
  d.log_det_P_delta = st.log_det_augmented;
  d.log_det_Emp_delta = st.log_det_emp;
  d.log_det_shifted = st.log_det_shifted;
  d.limit_integral = limit_potential_grid(T.symbol, grid, {z}).front();
  d.schur_residual = st.residual;

  d.B1 = d.log_det_P / n - d.limit_integral;
  d.B2 = (d.log_det_P_delta - d.log_det_P) / n;
  d.B3 = d.log_det_Emp_delta / n;
  d.reassembly_residual = std::abs(d.B1 + d.B2 + d.B3 - (d.log_det_shifted / n - d.limit_integral));

  const int dcx = T.space.complex_dimension;
  d.count_exponent = dcx - std::min(2.0 * rho * opts.kappa, 1.0 - 2.0 * rho);
  d.count_ratio = d.A / std::pow(static_cast<double>(T.N), d.count_exponent);
  const double t = std::pow(n, -2.0 / dcx - 0.5);
  d.b3_lower = d.delta > 0 ? d.A / n * std::log(t * d.delta) : -std::numeric_limits<double>::infinity();
  d.s_A = d.A > 0 ? smallest_singular_value(sys.inverse.Emp) : 0.0;
  return d;
}

CountScan small_eigen_count_scan(const SymbolSpec& f, cplx z, double rho, const std::vector<int>& Ns) {
  if (!(rho > 0 && rho < 0.5)) throw std::invalid_argument("small_eigen_count_scan: rho must lie in (0, 1/2)");
  CountScan scan;
  std::vector<double> lx, ly;
  for (int N : Ns) {
    const auto T = quantize(f, N);
    const RVector t = singular_values_ascending(T.entries - z * CMatrix::Identity(T.dim, T.dim));
    const double alpha = std::pow(static_cast<double>(N), -2.0 * rho);
    CountRow row{N, T.dim, 0};
    for (Eigen::Index i = 0; i < t.size(); ++i)
      if (t(i) * t(i) <= alpha) ++row.A;
    scan.rows.push_back(row);
    if (row.A > 0) {
      lx.push_back(std::log(static_cast<double>(N)));
      ly.push_back(std::log(static_cast<double>(row.A)));
    }
  }
  scan.fitted_points = static_cast<int>(lx.size());
  if (lx.size() >= 2) {
    const auto fit = fit_line(lx, ly);
    scan.exponent = fit.slope;
    scan.exponent_stderr = fit.slope_stderr;
  }
  return scan;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsB>& rows) {
  CsvWriter w(os);
  w.header({"N", "z_re", "z_im", "rho", "delta", "seed", "A", "B1", "B2", "B3", "schur_residual", "flags"});
  for (const auto& d : rows)
    w.row(d.N, d.z.real(), d.z.imag(), d.rho, d.delta, d.seed, d.A, d.B1, d.B2, d.B3, d.schur_residual,
          describe_flags(d.flags));
}

} // namespace btq
