// btq: command-line front end.
//
//   btq quantize  --symbol S --N n                 matrix file
//   btq spectrum  --symbol S --N n [--delta RULE]  eigenvalue CSV
//   btq potential --symbol S --N n,n,...           potential deviation CSV
//   btq grushin   --symbol S --N n,... --z re,im   B-diagnostics CSV
//   btq kappa     --symbol S                       kappa estimate per probe
//   btq run       --config FILE | --preset NAME    full sweep into --out
//   btq verify    --out DIR [--suite NAME]         pass/fail report
//
// Global flags: --config, --seed, --out, --workers, --preset.

#include "btq/config.hpp"
#include "btq/csv.hpp"
#include "btq/grushin.hpp"
#include "btq/harness.hpp"
#include "btq/potential.hpp"
#include "btq/quantize.hpp"
#include "btq/randmat.hpp"
#include "btq/rng.hpp"
#include "btq/spectra.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string out;
  int workers = 0;
  std::string preset;
  bool full_scale = false;
};

void write_output(const std::string& out, const std::function<void(std::ostream&)>& body) {
  if (out.empty() || out == "-") {
    body(std::cout);
    return;
  }
  btq::write_file_atomic(out, body);
}

btq::cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {std::stod(s), 0.0};
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

btq::PerturbationSchedule schedule_from(const std::string& rule, double scale, double power, double eps) {
  btq::PerturbationSchedule s;
  s.rule = btq::parse_delta_rule(rule);
  s.scale = scale;
  s.power = power;
  s.epsilon = eps;
  return s;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berezin-Toeplitz quantization laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { g.seed = s; g.seed_set = true; },
                                         "Master seed");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--workers", g.workers, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--preset", g.preset, "Named preset");
  app.add_flag("--full-scale", g.full_scale, "Use the full figure sizes in presets");

  std::string symbol = "sphere-fig3";
  int N = 50;
  std::vector<int> Ns;
  std::string spec_rule = "none", pot_rule = "inverse-N", gru_rule = "inverse-N";
  double delta_scale = 1.0, delta_power = 1.0, epsilon = 0.25;
  auto add_symbol = [&](CLI::App* sub) {
    sub->add_option("--symbol", symbol, "Named symbol or symbol record")->capture_default_str();
  };
  auto add_delta = [&](CLI::App* sub, std::string& rule) {
    sub->add_option("--delta", rule, "none | inverse-N | default | power")->capture_default_str();
    sub->add_option("--delta-scale", delta_scale, "Scale for the power rule");
    sub->add_option("--delta-power", delta_power, "Exponent for the power rule");
    sub->add_option("--epsilon", epsilon, "Schedule epsilon")->capture_default_str();
  };

  auto* quant = app.add_subcommand("quantize", "Write T_N f as a matrix file");
  add_symbol(quant);
  quant->add_option("--N", N, "Quantization level")->required();

  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of T_N f + delta G");
  add_symbol(spec);
  spec->add_option("--N", N, "Quantization level");
  std::string matrix_in;
  spec->add_option("--matrix", matrix_in, "Read T_N f from a matrix file instead");
  add_delta(spec, spec_rule);

  auto* pot = app.add_subcommand("potential", "Empirical vs limit log-potential sweep");
  add_symbol(pot);
  pot->add_option("--N", Ns, "Sizes")->required()->delimiter(',');
  int realizations = 5, probe_n = 41;
  pot->add_option("--realizations", realizations)->capture_default_str();
  pot->add_option("--probes", probe_n, "Probe grid side")->capture_default_str();
  add_delta(pot, pot_rule);

  auto* gru = app.add_subcommand("grushin", "B1/B2/B3 diagnostics at one probe");
  add_symbol(gru);
  gru->add_option("--N", Ns, "Sizes")->required()->delimiter(',');
  std::string zs = "0.3,0.2";
  double rho = 0.25;
  gru->add_option("--z", zs, "Probe re,im")->capture_default_str();
  gru->add_option("--rho", rho)->capture_default_str();
  gru->add_option("--realizations", realizations)->capture_default_str();
  add_delta(gru, gru_rule);

  auto* kap = app.add_subcommand("kappa", "Monte-Carlo regularity exponent");
  add_symbol(kap);
  int samples = 100000, kgrid = 7;
  kap->add_option("--samples", samples)->capture_default_str();
  kap->add_option("--grid", kgrid, "Probe grid side over the image bounding box")->capture_default_str();

  auto* runc = app.add_subcommand("run", "Run a configured experiment");
  auto* ver = app.add_subcommand("verify", "Check a finished run");
  std::string suite = "acceptance";
  ver->add_option("--suite", suite)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (g.workers > 0) omp_set_num_threads(g.workers);
#endif

  try {
    if (*quant) {
      const auto t = btq::quantize(btq::parse_symbol(symbol), N);
      write_output(g.out, [&](std::ostream& os) { btq::write_matrix(os, t); });
      return 0;
    }
    if (*spec) {
      const auto t = matrix_in.empty() ? btq::quantize(btq::parse_symbol(symbol), N) : btq::load_matrix(matrix_in);
      const auto sched = schedule_from(spec_rule, delta_scale, delta_power, epsilon);
      const double delta = sched.delta(t.N);
      btq::CMatrix m = t.entries;
      const std::uint64_t seed = btq::derive_seed(g.seed, static_cast<std::uint64_t>(t.N), 0);
      if (delta > 0) m += delta * btq::sample_ginibre(t.dim, seed).entries;
      const auto s = btq::eigenvalues(m, {"cli", delta, seed});
      write_output(g.out, [&](std::ostream& os) { btq::write_spectrum_csv(os, s); });
      return 0;
    }
    if (*pot) {
      btq::SweepConfig sc;
      sc.symbol = btq::parse_symbol(symbol);
      sc.Ns = Ns;
      sc.schedule = schedule_from(pot_rule, delta_scale, delta_power, epsilon);
      sc.realizations = realizations;
      sc.master_seed = g.seed;
      sc.probes = btq::default_probe_grid(sc.symbol, probe_n, probe_n);
      const auto rep = btq::potential_sweep(sc);
      write_output(g.out, [&](std::ostream& os) { btq::write_potential_csv(os, rep.rows); });
      for (const auto& s : rep.summaries)
        std::cerr << "N=" << s.N << " median_deviation=" << btq::format_number(s.median_deviation)
                  << " probes=" << s.probes << " singular=" << s.singular_probes << "\n";
      return 0;
    }
    if (*gru) {
      const auto f = btq::parse_symbol(symbol);
      const auto sched = schedule_from(gru_rule, delta_scale, delta_power, epsilon);
      const auto grid = btq::liouville_quadrature(btq::make_phase_space(f.kind()), 128);
      const auto z = parse_complex(zs);
      std::vector<btq::DiagnosticsB> rows;
      for (int n : Ns) {
        const auto t = btq::quantize(f, n);
        const double delta = sched.delta(n);
        const int reps = delta > 0 ? realizations : 1;
        for (int r = 0; r < reps; ++r) {
          const std::uint64_t seed = btq::derive_seed(g.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
          btq::GinibreSample G;
          if (delta > 0) G = btq::sample_ginibre(t.dim, seed);
          rows.push_back(btq::b_diagnostics(t, z, rho, delta, delta > 0 ? &G.entries : nullptr, grid, {1.0, seed}));
        }
      }
      write_output(g.out, [&](std::ostream& os) { btq::write_diagnostics_csv(os, rows); });
      return 0;
    }
    if (*kap) {
      const auto f = btq::parse_symbol(symbol);
      const auto b = btq::image_bounding_box(f);
      std::vector<btq::cplx> zgrid;
      for (int i = 0; i < kgrid; ++i)
        for (int j = 0; j < kgrid; ++j)
          zgrid.emplace_back(b.re_lo + (b.re_hi - b.re_lo) * i / std::max(1, kgrid - 1),
                             b.im_lo + (b.im_hi - b.im_lo) * j / std::max(1, kgrid - 1));
      const auto est = btq::estimate_kappa(f, zgrid, samples, {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1}, g.seed);
      write_output(g.out, [&](std::ostream& os) {
        btq::CsvWriter w(os);
        w.header({"z_re", "z_im", "skipped", "slope", "fit_residual"});
        for (const auto& p : est.diagnostics) w.row(p.z.real(), p.z.imag(), p.skipped ? 1 : 0, p.slope, p.fit_residual);
      });
      std::cerr << "kappa=" << btq::format_number(est.kappa) << "\n";
      return 0;
    }
    if (*runc) {
      if (g.config.empty() == g.preset.empty()) {
        std::cerr << "run: give exactly one of --config or --preset\n";
        return 2;
      }
      auto cfg = g.config.empty() ? btq::preset_config(g.preset, g.full_scale) : btq::load_config(g.config);
      if (g.seed_set) cfg.master_seed = g.seed;
      if (!g.out.empty()) cfg.out = g.out;
      if (g.workers > 0) cfg.workers = g.workers;
      const auto v = btq::validate(cfg);
      const auto rec = btq::run(v);
      int failed = 0;
      for (const auto& c : rec.cells)
        if (!c.ok) {
          ++failed;
          std::cerr << "cell N=" << c.N << " r=" << c.realization << " failed: " << c.error << "\n";
        }
      std::cout << "run " << rec.out_dir << ": " << rec.cells.size() << " cells, " << failed << " failed, kappa_hat="
                << btq::format_number(rec.kappa_hat) << ", gamma=" << btq::format_number(rec.gamma) << ", "
                << btq::format_number(rec.wall_clock_seconds) << " s\n";
      return failed ? 1 : 0;
    }
    if (*ver) {
      if (g.out.empty()) {
        std::cerr << "verify: --out DIR is required\n";
        return 2;
      }
      const auto rep = btq::verify(g.out, suite);
      std::cout << rep.to_json();
      for (const auto& e : rep.entries) std::cerr << btq::to_string(e.status) << "  " << e.name << "  " << e.detail << "\n";
      return rep.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "btq: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
