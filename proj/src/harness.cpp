#include "btq/harness.hpp"

#include "btq/csv.hpp"
#include "btq/grushin.hpp"
#include "btq/parallel.hpp"
#include "btq/potential.hpp"
#include "btq/quantize.hpp"
#include "btq/rng.hpp"
#include "btq/spectra.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef BTQ_VERSION
#define BTQ_VERSION "dev"
#endif

namespace btq {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunRecord::all_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellRecord& c) { return c.ok; });
}

namespace {

std::string cell_dir_name(int N, int r) { return "cells/N" + std::to_string(N) + "_r" + std::to_string(r); }

struct Shared {
  const ValidatedConfig* v = nullptr;
  std::map<int, ToeplitzMatrix> toeplitz;
  std::map<int, std::string> quantize_errors;
  std::vector<double> u_lim;
  WeylPrediction weyl;
  QuadratureGrid grid;
  SweepConfig sweep;
};

void emit(CellRecord& cell, const fs::path& root, const std::string& name,
          const std::function<void(std::ostream&)>& body) {
  const std::string rel = cell_dir_name(cell.N, cell.realization) + "/" + name;
  const std::string path = (root / rel).string();
  write_file_atomic(path, body);
  cell.artifacts[name] = rel;
  cell.checksums[name] = file_checksum(path);
}

void run_cell(CellRecord& cell, const Shared& sh, const fs::path& root) {
  const auto& c = sh.v->config;
  if (auto it = sh.quantize_errors.find(cell.N); it != sh.quantize_errors.end()) throw std::runtime_error(it->second);
  const ToeplitzMatrix& T = sh.toeplitz.at(cell.N);
  fs::create_directories(root / cell_dir_name(cell.N, cell.realization));

  GinibreSample G;
  CMatrix m = T.entries;
  if (cell.delta > 0) {
    G = sample_ginibre(T.dim, cell.seed);
    m += cell.delta * G.entries;
  }
  const bool need_spectrum = c.stage_spectra || c.stage_cdf || c.stage_potential;
  SpectrumResult spec;
  if (need_spectrum) spec = eigenvalues(m, {"T_N + delta G", cell.delta, cell.seed});

  if (c.stage_spectra) emit(cell, root, "spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, spec); });

  if (c.stage_cdf && !c.radii.empty()) {
    const auto emp = empirical_fractions(spec, disk_family(c.region_center, c.radii));
    const auto cmp = weyl_compare(emp, sh.weyl);
    emit(cell, root, "cdf.csv", [&](std::ostream& os) {
      CsvWriter w(os);
      w.header({"radius", "empirical", "predicted", "deviation"});
      for (std::size_t i = 0; i < c.radii.size(); ++i) w.row(c.radii[i], cmp.empirical[i], cmp.predicted[i], cmp.deviation[i]);
    });
  }

  if (c.stage_potential) {
    const auto rows = potential_cell(m, cell.N, cell.seed, sh.v->probes, sh.u_lim, spec, sh.sweep);
    emit(cell, root, "potential.csv", [&](std::ostream& os) { write_potential_csv(os, rows); });
  }

  if (c.stage_grushin && !c.grushin_probes.empty()) {
    std::vector<DiagnosticsB> rows;
    for (const auto& z : c.grushin_probes)
      rows.push_back(b_diagnostics(T, z, c.rho, cell.delta, cell.delta > 0 ? &G.entries : nullptr, sh.grid,
                                   {sh.v->kappa_hat, cell.seed}));
    emit(cell, root, "diagnostics.csv", [&](std::ostream& os) { write_diagnostics_csv(os, rows); });
  }
}

json cell_to_json(const CellRecord& c) {
  json j{{"N", c.N}, {"realization", c.realization}, {"seed", c.seed}, {"delta", c.delta}, {"ok", c.ok}};
  if (!c.ok) j["error"] = c.error;
  json arts = json::object();
  for (const auto& [name, path] : c.artifacts) arts[name] = {{"path", path}, {"checksum", c.checksums.at(name)}};
  j["artifacts"] = arts;
  return j;
}

} // namespace

RunRecord run(const ValidatedConfig& v) {
  const auto start = std::chrono::steady_clock::now();
  const auto& c = v.config;
  const fs::path root(c.out);
  fs::create_directories(root / "cells");

  RunRecord rec;
  rec.out_dir = root.string();
  const std::string config_text = config_to_json(c);
  rec.config_hash = checksum_bytes(config_text);
  rec.kappa_hat = v.kappa_hat;
  rec.gamma = v.gamma;

  for (int N : c.unperturbed_Ns) {
    CellRecord cell;
    cell.N = N;
    cell.seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(N), 0);
    rec.cells.push_back(cell);
  }
  for (int N : c.Ns)
    for (int r = 0; r < c.realizations; ++r) {
      CellRecord cell;
      cell.N = N;
      cell.realization = r;
      cell.seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(r));
      cell.delta = c.schedule.delta(N);
      rec.cells.push_back(cell);
    }

  Shared sh;
  sh.v = &v;
  std::set<int> sizes(c.Ns.begin(), c.Ns.end());
  sizes.insert(c.unperturbed_Ns.begin(), c.unperturbed_Ns.end());
  for (int N : sizes) {
    try {
      sh.toeplitz.emplace(N, quantize(v.symbol, N));
    } catch (const std::exception& e) {
      sh.quantize_errors[N] = std::string("quantize: ") + e.what();
    }
  }
  const PhaseSpace space = make_phase_space(v.symbol.kind());
  sh.grid = liouville_quadrature(space, c.quadrature);
  if (c.stage_potential) sh.u_lim = limit_potential_grid(v.symbol, sh.grid, v.probes);
  if (c.stage_cdf && !c.radii.empty()) {
    WeylMethod method;
    method.kind = c.weyl_quadrature ? WeylMethod::Kind::Quadrature : WeylMethod::Kind::MonteCarlo;
    method.resolution = c.weyl_resolution;
    method.samples = c.weyl_samples;
    sh.weyl = weyl_predict(v.symbol, space, disk_family(c.region_center, c.radii), method);
  }
  sh.sweep.min_distance = c.min_distance;

  parallel_for(static_cast<long>(rec.cells.size()), c.workers, [&](long i) {
    auto& cell = rec.cells[static_cast<std::size_t>(i)];
    try {
      run_cell(cell, sh, root);
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
  });

  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest{{"tool", "btq"},
                {"version", BTQ_VERSION},
                {"config_hash", rec.config_hash},
                {"kappa_hat", rec.kappa_hat},
                {"gamma", rec.gamma},
                {"wall_clock_seconds", rec.wall_clock_seconds}};
  manifest["cells"] = json::array();
  for (const auto& cell : rec.cells) manifest["cells"].push_back(cell_to_json(cell));
  write_file_atomic((root / "config.json").string(), [&](std::ostream& os) { os << config_text; });
  write_file_atomic((root / "manifest.json").string(), [&](std::ostream& os) { os << manifest.dump(2) << "\n"; });
  return rec;
}

RunRecord load_record(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "manifest.json");
  if (!is) throw std::runtime_error("no manifest.json in '" + dir + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("manifest.json: ") + e.what());
  }
  RunRecord rec;
  rec.out_dir = dir;
  rec.config_hash = j.value("config_hash", "");
  rec.kappa_hat = j.value("kappa_hat", 1.0);
  rec.gamma = j.value("gamma", 0.0);
  rec.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  for (const auto& cj : j.at("cells")) {
    CellRecord c;
    c.N = cj.at("N").get<int>();
    c.realization = cj.at("realization").get<int>();
    c.seed = cj.at("seed").get<std::uint64_t>();
    c.delta = cj.at("delta").get<double>();
    c.ok = cj.at("ok").get<bool>();
    c.error = cj.value("error", "");
    for (const auto& [name, a] : cj.at("artifacts").items()) {
      c.artifacts[name] = a.at("path").get<std::string>();
      c.checksums[name] = a.at("checksum").get<std::string>();
    }
    rec.cells.push_back(c);
  }
  return rec;
}

std::string to_string(CheckStatus s) {
  switch (s) {
  case CheckStatus::Pass: return "PASS";
  case CheckStatus::Fail: return "FAIL";
  case CheckStatus::Skipped: return "SKIPPED";
  }
  return "SKIPPED";
}

bool VerifyReport::ok() const {
  return std::none_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.status == CheckStatus::Fail; });
}

std::string VerifyReport::to_json() const {
  json j{{"ok", ok()}, {"entries", json::array()}};
  for (const auto& e : entries)
    j["entries"].push_back({{"name", e.name},
                            {"status", btq::to_string(e.status)},
                            {"value", std::isfinite(e.value) ? json(e.value) : json(format_number(e.value))},
                            {"threshold", e.threshold},
                            {"detail", e.detail}});
  return j.dump(2) + "\n";
}

std::vector<std::string> suite_names() { return {"integrity", "weyl", "potential", "grushin", "acceptance"}; }

namespace {

using ArtifactList = std::vector<std::pair<const CellRecord*, fs::path>>;

ArtifactList artifacts_named(const RunRecord& rec, const std::string& name, bool perturbed_only) {
  ArtifactList out;
  for (const auto& c : rec.cells) {
    if (perturbed_only && c.delta == 0) continue;
    auto it = c.artifacts.find(name);
    if (it == c.artifacts.end()) continue;
    const fs::path p = fs::path(rec.out_dir) / it->second;
    if (fs::exists(p)) out.emplace_back(&c, p);
  }
  return out;
}

std::string cell_label(const CellRecord& c) {
  return "N=" + std::to_string(c.N) + " r=" + std::to_string(c.realization);
}

void check_integrity(const RunRecord& rec, VerifyReport& rep) {
  CheckEntry e{"integrity", CheckStatus::Skipped, 0, 0, ""};
  int checked = 0, missing = 0;
  std::string bad;
  for (const auto& c : rec.cells)
    for (const auto& [name, rel] : c.artifacts) {
      const fs::path p = fs::path(rec.out_dir) / rel;
      if (!fs::exists(p)) {
        ++missing;
        continue;
      }
      ++checked;
      if (file_checksum(p.string()) != c.checksums.at(name)) bad += (bad.empty() ? "" : ", ") + rel;
    }
  e.value = checked;
  if (!bad.empty()) {
    e.status = CheckStatus::Fail;
    e.detail = "checksum mismatch: " + bad;
  } else if (checked > 0) {
    e.status = CheckStatus::Pass;
    e.detail = std::to_string(checked) + " artifacts match";
  } else {
    e.detail = "no artifacts present";
  }
  if (missing > 0) e.detail += "; " + std::to_string(missing) + " missing";
  rep.entries.push_back(e);
  for (const auto& c : rec.cells)
    if (!c.ok) rep.entries.push_back({"cell " + cell_label(c), CheckStatus::Fail, 0, 0, c.error});
}

void check_weyl(const RunRecord& rec, VerifyReport& rep) {
  const double tol = 0.05;
  const auto arts = artifacts_named(rec, "cdf.csv", true);
  if (arts.empty()) {
    rep.entries.push_back({"weyl", CheckStatus::Skipped, 0, tol, "no disk-CDF artifacts"});
    return;
  }
  for (const auto& [cell, path] : arts) {
    const auto t = read_csv(path.string());
    double sup = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) sup = std::max(sup, t.number(i, "deviation"));
    rep.entries.push_back({"weyl " + cell_label(*cell), sup <= tol ? CheckStatus::Pass : CheckStatus::Fail, sup, tol,
                           "sup |empirical - predicted| over " + std::to_string(t.rows.size()) + " radii"});
  }
}

void check_potential(const RunRecord& rec, VerifyReport& rep) {
  const double tol = 0.05;
  const auto arts = artifacts_named(rec, "potential.csv", true);
  if (arts.empty()) {
    rep.entries.push_back({"potential", CheckStatus::Skipped, 0, tol, "no potential artifacts"});
    return;
  }
  std::map<int, std::map<std::pair<double, double>, std::vector<double>>> per_n;
  for (const auto& [cell, path] : arts) {
    const auto t = read_csv(path.string());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double d = t.number(i, "deviation");
      if (std::isfinite(d)) per_n[cell->N][{t.number(i, "z_re"), t.number(i, "z_im")}].push_back(d);
    }
  }
  std::map<int, double> med;
  for (auto& [N, zs] : per_n) {
    std::vector<double> m;
    for (auto& [z, devs] : zs) m.push_back(median(devs));
    med[N] = median(m);
  }
  if (med.empty()) {
    rep.entries.push_back({"potential", CheckStatus::Skipped, 0, tol, "no finite evaluations"});
    return;
  }
  const auto [n_lo, m_lo] = *med.begin();
  const auto [n_hi, m_hi] = *med.rbegin();
  bool pass = m_hi <= tol;
  std::string detail = "median deviation " + format_number(m_hi) + " at N=" + std::to_string(n_hi);
  if (med.size() >= 2) {
    pass = pass && m_hi < m_lo;
    detail += ", " + format_number(m_lo) + " at N=" + std::to_string(n_lo);
  }
  rep.entries.push_back({"potential", pass ? CheckStatus::Pass : CheckStatus::Fail, m_hi, tol, detail});
}

void check_grushin(const RunRecord& rec, VerifyReport& rep) {
  const auto arts = artifacts_named(rec, "diagnostics.csv", false);
  if (arts.empty()) {
    rep.entries.push_back({"grushin", CheckStatus::Skipped, 0, 0, "no diagnostics artifacts"});
    return;
  }
  double worst_schur = 0;
  int b3_rows = 0, b3_bad = 0;
  std::map<std::pair<double, double>, std::map<int, std::vector<double>>> b1;
  for (const auto& [cell, path] : arts) {
    const auto t = read_csv(path.string());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double r = t.number(i, "schur_residual");
      if (std::isfinite(r)) worst_schur = std::max(worst_schur, r);
      if (t.number(i, "A") >= 1 && t.number(i, "delta") > 0) {
        ++b3_rows;
        if (!(t.number(i, "B3") < 0)) ++b3_bad;
      }
      b1[{t.number(i, "z_re"), t.number(i, "z_im")}][cell->N].push_back(std::abs(t.number(i, "B1")));
    }
  }
  rep.entries.push_back({"schur", worst_schur <= 1e-6 ? CheckStatus::Pass : CheckStatus::Fail, worst_schur, 1e-6,
                         "largest finite Schur identity residual"});
  if (b3_rows == 0)
    rep.entries.push_back({"b3-sign", CheckStatus::Skipped, 0, 0, "no perturbed rows with A >= 1"});
  else
    rep.entries.push_back({"b3-sign", b3_bad == 0 ? CheckStatus::Pass : CheckStatus::Fail, static_cast<double>(b3_bad), 0,
                           std::to_string(b3_bad) + " of " + std::to_string(b3_rows) + " rows with B3 >= 0"});
  for (auto& [z, by_n] : b1) {
    const std::string name = "b1-decay z=" + format_number(z.first) + "+" + format_number(z.second) + "i";
    if (by_n.size() < 2) {
      rep.entries.push_back({name, CheckStatus::Skipped, 0, 0.1, "needs at least two N"});
      continue;
    }
    const double lo = median(by_n.begin()->second), hi = median(by_n.rbegin()->second);
    const bool pass = hi < lo && lo < 0.1 && hi < 0.1;
    rep.entries.push_back({name, pass ? CheckStatus::Pass : CheckStatus::Fail, hi, 0.1,
                           "|B1| " + format_number(lo) + " -> " + format_number(hi)});
  }
}

} // namespace

VerifyReport verify(const std::string& dir, const std::string& suite) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("verify: unknown suite '" + suite + "'");
  VerifyReport rep;
  RunRecord rec;
  try {
    rec = load_record(dir);
  } catch (const std::exception& e) {
    rep.entries.push_back({suite, CheckStatus::Skipped, 0, 0, e.what()});
    return rep;
  }
  const bool all = suite == "acceptance";
  if (all || suite == "integrity") check_integrity(rec, rep);
  if (all || suite == "weyl") check_weyl(rec, rep);
  if (all || suite == "potential") check_potential(rec, rep);
  if (all || suite == "grushin") check_grushin(rec, rep);
  return rep;
}

} // namespace btq
