#pragma once

#include "btq/config.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace btq {

/// One (N, realization) unit of work. Unperturbed sizes have a single
/// realization with delta = 0.
struct CellRecord {
  int N = 0;
  int realization = 0;
  std::uint64_t seed = 0;  // derive_seed(master, N, realization)
  double delta = 0;
  bool ok = true;
  std::string error;
  std::map<std::string, std::string> artifacts;  // name -> path relative to the run directory
  std::map<std::string, std::string> checksums;  // name -> FNV-1a
};

struct RunRecord {
  std::string out_dir;
  std::string config_hash;
  double kappa_hat = 1;
  double gamma = 0;
  double wall_clock_seconds = 0;
  std::vector<CellRecord> cells;

  bool all_ok() const;
};

/// quantize -> perturb -> spectrum / disk CDF / potential / Grushin for
/// every cell. Artifacts go to <out>/cells/N<N>_r<r>/ via atomic writes; a
/// failing cell records its error and the others continue. manifest.json
/// and config.json are written after all cells finish.
RunRecord run(const ValidatedConfig& config);

/// Reads <dir>/manifest.json back.
RunRecord load_record(const std::string& dir);

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double value = 0;
  double threshold = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckEntry> entries;
  bool ok() const;  // no Fail entries
  std::string to_json() const;
};

/// Suites: "integrity" (artifact checksums), "weyl" (sup disk-CDF
/// deviation <= 0.05 per cell), "potential" (median deviation at the
/// largest N <= 0.05 and below the smallest N), "grushin" (Schur residual
/// <= 1e-6, B3 < 0 where A >= 1, |B1| decreasing and < 0.1), "acceptance"
/// (all of them). Missing artifacts give Skipped entries.
VerifyReport verify(const std::string& dir, const std::string& suite);
std::vector<std::string> suite_names();

} // namespace btq
