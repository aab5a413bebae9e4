#include "btq/config.hpp"

#include "btq/csv.hpp"
#include "btq/potential.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace btq {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

cplx to_cplx(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> to_points(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of [re, im]");
  std::vector<cplx> out;
  for (const auto& p : j) out.push_back(to_cplx(p, where));
  return out;
}

json from_points(const std::vector<cplx>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({p.real(), p.imag()});
  return a;
}

std::string rule_name(DeltaRule r) {
  switch (r) {
  case DeltaRule::None: return "none";
  case DeltaRule::InverseNd: return "inverse-N";
  case DeltaRule::Default: return "default";
  case DeltaRule::Power: return "power";
  }
  return "default";
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

} // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  require_keys(j, "config",
               {"name", "symbol", "space", "N", "unperturbed_N", "delta", "epsilon", "rho", "gamma", "seed",
                "realizations", "probes", "regions", "grushin", "quadrature", "weyl", "kappa", "stages", "workers",
                "out"});
  ExperimentConfig c;
  if (j.contains("name")) c.name = get<std::string>(j, "name", "config");
  c.symbol = get<std::string>(j, "symbol", "config");
  c.Ns = get<std::vector<int>>(j, "N", "config");
  if (j.contains("unperturbed_N")) c.unperturbed_Ns = get<std::vector<int>>(j, "unperturbed_N", "config");
  if (j.contains("space")) {
    try {
      const auto kind = parse_space_kind(get<std::string>(j, "space", "config"));
      if (parse_symbol(c.symbol).kind() != kind) throw ConfigError("config: space does not match the symbol");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.space: ") + e.what());
    }
  }
  if (j.contains("delta")) {
    const auto& d = j["delta"];
    require_keys(d, "config.delta", {"rule", "scale", "power", "c_exponent"});
    if (d.contains("rule")) {
      try {
        c.schedule.rule = parse_delta_rule(get<std::string>(d, "rule", "config.delta"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config.delta.rule: ") + e.what());
      }
    }
    if (d.contains("scale")) c.schedule.scale = get<double>(d, "scale", "config.delta");
    if (d.contains("power")) c.schedule.power = get<double>(d, "power", "config.delta");
    if (d.contains("c_exponent")) c.schedule.c_exponent = get<double>(d, "c_exponent", "config.delta");
  }
  if (j.contains("epsilon")) c.schedule.epsilon = get<double>(j, "epsilon", "config");
  if (j.contains("rho")) c.rho = get<double>(j, "rho", "config");
  if (j.contains("gamma") && !j["gamma"].is_null()) c.gamma = get<double>(j, "gamma", "config");
  if (j.contains("seed")) c.master_seed = get<std::uint64_t>(j, "seed", "config");
  if (j.contains("realizations")) c.realizations = get<int>(j, "realizations", "config");
  if (j.contains("probes")) {
    const auto& p = j["probes"];
    require_keys(p, "config.probes", {"nx", "ny", "points", "min_distance"});
    if (p.contains("nx")) c.probe_nx = get<int>(p, "nx", "config.probes");
    if (p.contains("ny")) c.probe_ny = get<int>(p, "ny", "config.probes");
    if (p.contains("points")) c.probe_points = to_points(p["points"], "config.probes.points");
    if (p.contains("min_distance")) c.min_distance = get<double>(p, "min_distance", "config.probes");
  }
  if (j.contains("regions")) {
    const auto& r = j["regions"];
    require_keys(r, "config.regions", {"center", "radii", "count", "max_radius"});
    if (r.contains("center")) c.region_center = to_cplx(r["center"], "config.regions.center");
    if (r.contains("radii")) {
      if (r.contains("count")) throw ConfigError("config.regions: give either radii or count");
      c.radii = get<std::vector<double>>(r, "radii", "config.regions");
    } else if (r.contains("count")) {
      const double rmax = r.contains("max_radius") ? get<double>(r, "max_radius", "config.regions") : 1.0;
      c.radii = linspace(0.0, rmax, get<int>(r, "count", "config.regions"));
    }
  }
  if (j.contains("grushin")) {
    require_keys(j["grushin"], "config.grushin", {"probes"});
    if (j["grushin"].contains("probes")) c.grushin_probes = to_points(j["grushin"]["probes"], "config.grushin.probes");
  }
  if (j.contains("quadrature")) c.quadrature = get<int>(j, "quadrature", "config");
  if (j.contains("weyl")) {
    const auto& w = j["weyl"];
    require_keys(w, "config.weyl", {"method", "resolution", "samples"});
    if (w.contains("method")) {
      const auto m = get<std::string>(w, "method", "config.weyl");
      if (m != "quadrature" && m != "monte-carlo") throw ConfigError("config.weyl.method: unknown method '" + m + "'");
      c.weyl_quadrature = m == "quadrature";
    }
    if (w.contains("resolution")) c.weyl_resolution = get<int>(w, "resolution", "config.weyl");
    if (w.contains("samples")) c.weyl_samples = get<int>(w, "samples", "config.weyl");
  }
  if (j.contains("kappa")) {
    const auto& k = j["kappa"];
    require_keys(k, "config.kappa", {"samples", "t_grid", "nx", "ny"});
    if (k.contains("samples")) c.kappa_samples = get<int>(k, "samples", "config.kappa");
    if (k.contains("t_grid")) c.kappa_t_grid = get<std::vector<double>>(k, "t_grid", "config.kappa");
    if (k.contains("nx")) c.kappa_nx = get<int>(k, "nx", "config.kappa");
    if (k.contains("ny")) c.kappa_ny = get<int>(k, "ny", "config.kappa");
  }
  if (j.contains("stages")) {
    const auto& s = j["stages"];
    require_keys(s, "config.stages", {"spectra", "cdf", "potential", "grushin"});
    if (s.contains("spectra")) c.stage_spectra = get<bool>(s, "spectra", "config.stages");
    if (s.contains("cdf")) c.stage_cdf = get<bool>(s, "cdf", "config.stages");
    if (s.contains("potential")) c.stage_potential = get<bool>(s, "potential", "config.stages");
    if (s.contains("grushin")) c.stage_grushin = get<bool>(s, "grushin", "config.stages");
  }
  if (j.contains("workers")) c.workers = get<int>(j, "workers", "config");
  if (j.contains("out")) c.out = get<std::string>(j, "out", "config");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["symbol"] = c.symbol;
  j["N"] = c.Ns;
  j["unperturbed_N"] = c.unperturbed_Ns;
  j["delta"] = {{"rule", rule_name(c.schedule.rule)},
                {"scale", c.schedule.scale},
                {"power", c.schedule.power},
                {"c_exponent", c.schedule.c_exponent}};
  j["epsilon"] = c.schedule.epsilon;
  j["rho"] = c.rho;
  j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  j["seed"] = c.master_seed;
  j["realizations"] = c.realizations;
  j["probes"] = {{"nx", c.probe_nx}, {"ny", c.probe_ny}, {"points", from_points(c.probe_points)},
                 {"min_distance", c.min_distance}};
  j["regions"] = {{"center", {c.region_center.real(), c.region_center.imag()}}, {"radii", c.radii}};
  j["grushin"] = {{"probes", from_points(c.grushin_probes)}};
  j["quadrature"] = c.quadrature;
  j["weyl"] = {{"method", c.weyl_quadrature ? "quadrature" : "monte-carlo"},
               {"resolution", c.weyl_resolution},
               {"samples", c.weyl_samples}};
  j["kappa"] = {{"samples", c.kappa_samples}, {"t_grid", c.kappa_t_grid}, {"nx", c.kappa_nx}, {"ny", c.kappa_ny}};
  j["stages"] = {{"spectra", c.stage_spectra},
                 {"cdf", c.stage_cdf},
                 {"potential", c.stage_potential},
                 {"grushin", c.stage_grushin}};
  j["workers"] = c.workers;
  j["out"] = c.out;
  return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() { return {"scottish-flag-figure1", "sphere-figure2", "sphere-figure3"}; }

ExperimentConfig preset_config(const std::string& name, bool full_scale) {
  ExperimentConfig c;
  c.name = name;
  c.out = "btq-" + name;
  c.schedule.rule = DeltaRule::InverseNd;
  if (name == "scottish-flag-figure1") {
    c.symbol = "scottish-flag";
    c.unperturbed_Ns = {50};
    c.Ns = {full_scale ? 1000 : 300};
    c.realizations = 1;
    c.stage_grushin = false;
  } else if (name == "sphere-figure2") {
    c.symbol = "sphere-fig2";
    c.unperturbed_Ns = {50};
    c.Ns = {full_scale ? 1000 : 300};
    c.realizations = 1;
    c.stage_grushin = false;
  } else if (name == "sphere-figure3") {
    c.symbol = "sphere-fig3";
    c.Ns = {full_scale ? 2000 : 300};
    c.realizations = 5;
    c.radii = linspace(0.0, 1.0, 50);
    c.grushin_probes = {{0.3, 0.2}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

ValidatedConfig validate(const ExperimentConfig& c) {
  ValidatedConfig v;
  v.config = c;
  if (c.Ns.empty()) throw ConfigError("config: N list is empty");
  try {
    v.symbol = parse_symbol(c.symbol);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.symbol: ") + e.what());
  }
  for (int N : c.Ns)
    if (N < 1) throw ConfigError("config: N must be positive");
  for (int N : c.unperturbed_Ns)
    if (N < 1) throw ConfigError("config: unperturbed N must be positive");
  if (c.realizations < 1) throw ConfigError("config: realizations must be >= 1");
  if (c.quadrature < 2) throw ConfigError("config: quadrature resolution must be >= 2");
  if (c.workers < 0) throw ConfigError("config: workers must be >= 0");
  if (c.probe_points.empty() && (c.probe_nx < 2 || c.probe_ny < 2)) throw ConfigError("config: probe grid too small");
  for (std::size_t i = 1; i < c.radii.size(); ++i)
    if (c.radii[i] < c.radii[i - 1] || c.radii[i - 1] < 0) throw ConfigError("config: radii must be nonnegative and ascending");

  const double eps = c.schedule.epsilon;
  if (!(eps > 0)) throw ConfigError("config: epsilon must be positive");
  if (!(c.rho > 0 && c.rho < std::min(0.5, eps)))
    throw ConfigError("config: rho = " + format_number(c.rho) + " must lie in (0, min(1/2, epsilon))");

  if (c.schedule.rule != DeltaRule::None) {
    for (int N : c.Ns) {
      try {
        delta_window(N, c.schedule);
      } catch (const ScheduleError& e) {
        throw ConfigError(std::string("config.delta: ") + e.what());
      }
    }
  }

  const Box b = image_bounding_box(v.symbol);
  std::vector<cplx> zs;
  for (int i = 0; i < c.kappa_nx; ++i)
    for (int k = 0; k < c.kappa_ny; ++k)
      zs.emplace_back(c.kappa_nx == 1 ? 0.5 * (b.re_lo + b.re_hi) : b.re_lo + (b.re_hi - b.re_lo) * i / (c.kappa_nx - 1),
                      c.kappa_ny == 1 ? 0.5 * (b.im_lo + b.im_hi) : b.im_lo + (b.im_hi - b.im_lo) * k / (c.kappa_ny - 1));
  try {
    v.kappa_hat = estimate_kappa(v.symbol, zs, c.kappa_samples, c.kappa_t_grid).kappa;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config.kappa: ") + e.what());
  }
  v.gamma_bound = std::min({eps - c.rho, 2 * c.rho * v.kappa_hat, 1 - 2 * c.rho});
  v.gamma = c.gamma ? *c.gamma : 0.5 * v.gamma_bound;
  if (!(v.gamma > 0 && v.gamma < v.gamma_bound))
    throw ConfigError("config: gamma = " + format_number(v.gamma) + " must lie in (0, " + format_number(v.gamma_bound) + ")");

  v.probes = c.probe_points.empty() ? default_probe_grid(v.symbol, c.probe_nx, c.probe_ny) : c.probe_points;
  return v;
}

} // namespace btq
