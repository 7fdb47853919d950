// Experiment driver for the angular collision model: homogeneous runs,
// linear stability reports, bifurcation sweeps, the small-diffusivity
// fixed-point profile, and the coarse spatial solver.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <omp.h>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "myxo/io.hpp"
#include "myxo/rng.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string out_dir = "out";
  int threads = 0;  // 0: all cores
  std::uint64_t seed = 0;
  std::string config_file;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
  cmd->add_option("--threads", args.threads,
                  "worker threads (0 = all cores); results are identical for "
                  "any value");
  cmd->add_option("--seed", args.seed, "RNG seed");
  cmd->add_option("--config", args.config_file,
                  "JSON config file; explicit flags override its values");
}

// Loads the --config file (or its "config" object, so a metadata.json can be
// fed back in) and overrides every option the command line did not set.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw CLI::ValidationError("--config", std::string("parse error: ") + e.what());
  }
  if (j.contains("config")) j = j["config"];
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      continue;  // foreign keys (mode, rng, ...) are ignored
    }
    if (opt->count() > 0) continue;  // explicit flag wins
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

json config_echo(const CLI::App* cmd) {
  json j;
  for (const CLI::Option* opt : cmd->get_options()) {
    const auto& lnames = opt->get_lnames();
    if (lnames.empty()) continue;
    const std::string& name = lnames.front();
    if (name == "config" || name == "help") continue;
    std::string value = opt->count() > 0 ? opt->results().back()
                                         : opt->get_default_str();
    if (value.empty()) continue;
    j[name] = value;
  }
  return j;
}

void write_metadata(const fs::path& dir, const std::string& mode,
                    const json& config, std::uint64_t seed, double wall_s,
                    const std::vector<std::string>& outputs) {
  json meta;
  meta["tool"] = "myxo";
  meta["version"] = myxo::version_string();
  meta["mode"] = mode;
  meta["config"] = config;
  meta["seed"] = seed;
  meta["rng"] = myxo::Rng::algorithm;
  meta["threads"] = omp_get_max_threads();
  meta["wall_time_s"] = wall_s;
  meta["outputs"] = outputs;
  myxo::ensure_directory(dir);
  std::ofstream out(dir / "metadata.json", std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + (dir / "metadata.json").string() +
                             "' for writing");
  }
  out << meta.dump(2) << '\n';
}

myxo::InitialSpec parse_initial(const std::string& text, std::uint64_t seed) {
  auto fail = [&](const std::string& why) -> myxo::InitialSpec {
    throw std::invalid_argument("bad --init '" + text + "': " + why);
  };
  if (text == "uniform") return myxo::UniformRandom{0.0, seed};
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "random") {
      return myxo::UniformRandom{std::stod(rest), seed};
    }
    if (kind == "point") {
      auto at = rest.find('@');
      if (at == std::string::npos) return fail("expected point:EPS@INDEX");
      return myxo::SinglePoint{std::stod(rest.substr(0, at)),
                               std::stoi(rest.substr(at + 1))};
    }
    if (kind == "plateaus") {
      // plateaus:M1@BEGIN:END,M2@BEGIN:END  (angles in radians)
      auto comma = rest.find(',');
      if (comma == std::string::npos) return fail("expected two plateaus");
      auto parse_one = [&](const std::string& part, double& m, double& b,
                           double& e) {
        auto at = part.find('@');
        auto mid = part.find(':', at);
        if (at == std::string::npos || mid == std::string::npos) {
          fail("expected M@BEGIN:END");
        }
        m = std::stod(part.substr(0, at));
        b = std::stod(part.substr(at + 1, mid - at - 1));
        e = std::stod(part.substr(mid + 1));
      };
      myxo::Plateaus p;
      parse_one(rest.substr(0, comma), p.m1, p.i1_begin, p.i1_end);
      parse_one(rest.substr(comma + 1), p.m2, p.i2_begin, p.i2_end);
      return p;
    }
    if (kind == "masses") {
      myxo::PointMasses pm;
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) return fail("expected INDEX=MASS pairs");
        pm.masses.emplace_back(std::stoi(item.substr(0, eq)),
                               std::stod(item.substr(eq + 1)));
      }
      if (pm.masses.empty()) return fail("no masses given");
      return pm;
    }
  } catch (const std::invalid_argument&) {
    return fail("unparsable number");
  } catch (const std::out_of_range&) {
    return fail("number out of range");
  }
  return fail("unknown kind '" + kind + "'");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start).count();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinetic alignment/reversal model with angular diffusion"};
  app.require_subcommand(1);

  // ---- simulate ----
  CommonArgs sim_common;
  myxo::SimConfig sim_cfg;
  sim_cfg.mu = 0.02;
  sim_cfg.t_end = 2000.0;
  std::string sim_kernel = "rod", sim_init = "random:1e-2";
  CLI::App* sim = app.add_subcommand(
      "simulate", "integrate the spatially homogeneous model");
  sim->add_option("--kernel", sim_kernel, "rod | maxwell")->default_str("rod");
  sim->add_option("--mu", sim_cfg.mu, "angular diffusivity")->default_str("0.02");
  sim->add_option("--n", sim_cfg.n, "angular half-resolution (odd)")->default_str("51");
  sim->add_option("--mass", sim_cfg.mass, "total mass")->default_str("1");
  sim->add_option("--dt", sim_cfg.dt, "time step (0 = auto)")->default_str("0");
  sim->add_option("--safety", sim_cfg.safety, "fraction of the stability bound")
      ->default_str("0.9");
  sim->add_option("--t-end", sim_cfg.t_end, "final time")->default_str("2000");
  sim->add_option("--cadence", sim_cfg.output_cadence,
                  "steps between trajectory records")->default_str("100");
  sim->add_option("--init", sim_init,
                  "uniform | random:EPS | point:EPS@K | "
                  "plateaus:M@B:E,M@B:E | masses:K=M,...")
      ->default_str("random:1e-2");
  add_common(sim, sim_common);

  // ---- spectrum ----
  CommonArgs spec_common;
  int spec_n = 51, spec_max_mode = 6;
  double spec_mu = 0.02, spec_mass = 1.0;
  std::string spec_kernel = "rod";
  CLI::App* spec = app.add_subcommand(
      "spectrum", "linear stability of the uniform state");
  spec->add_option("--kernel", spec_kernel, "rod | maxwell")->default_str("rod");
  spec->add_option("--n", spec_n, "angular half-resolution (odd)")->default_str("51");
  spec->add_option("--mass", spec_mass, "total mass")->default_str("1");
  spec->add_option("--mu", spec_mu, "diffusivity for the eigenvalue report")
      ->default_str("0.02");
  spec->add_option("--max-mode", spec_max_mode, "report modes 1..max")
      ->default_str("6");
  add_common(spec, spec_common);

  // ---- bifurcate ----
  CommonArgs bif_common;
  int bif_n = 51;
  double bif_mass = 1.0, bif_tmax = 3e4, bif_toleq = 1e-9;
  std::string bif_kernel = "rod";
  std::string bif_mu_list, bif_offsets = "0.01,0.0178,0.0316,0.0562,0.1";
  CLI::App* bif = app.add_subcommand(
      "bifurcate", "equilibrium amplitude sweep across the threshold");
  bif->add_option("--kernel", bif_kernel, "rod | maxwell")->default_str("rod");
  bif->add_option("--n", bif_n, "angular half-resolution (odd)")->default_str("51");
  bif->add_option("--mass", bif_mass, "total mass")->default_str("1");
  bif->add_option("--mu-list", bif_mu_list,
                  "comma-separated diffusivities (overrides --offsets)");
  bif->add_option("--offsets", bif_offsets,
                  "subcritical offsets, units of mu*: rows at "
                  "mu*_numeric - x * mu*")
      ->default_str("0.01,0.0178,0.0316,0.0562,0.1");
  bif->add_option("--t-max", bif_tmax, "equilibration time cap")->default_str("30000");
  bif->add_option("--tol-eq", bif_toleq, "stationarity tolerance (times mass)")
      ->default_str("1e-9");
  add_common(bif, bif_common);

  // ---- fixedpoint ----
  CommonArgs fp_common;
  double fp_R = 16.0, fp_tol = 1e-8, fp_omega = 0.5;
  int fp_N = 1601, fp_maxit = 500;
  CLI::App* fp = app.add_subcommand(
      "fixedpoint", "small-diffusivity limit profile F = S(F)");
  fp->add_option("--R", fp_R, "line truncation radius")->default_str("16");
  fp->add_option("--N", fp_N, "line nodes (odd)")->default_str("1601");
  fp->add_option("--tol", fp_tol, "sup-residual tolerance")->default_str("1e-8");
  fp->add_option("--omega", fp_omega, "Picard damping in (0,1]")->default_str("0.5");
  fp->add_option("--max-iter", fp_maxit, "iteration cap")->default_str("500");
  add_common(fp, fp_common);

  // ---- spatial ----
  CommonArgs sp_common;
  myxo::SpatialConfig sp_cfg;
  sp_cfg.mu = 8.0;
  sp_cfg.t_end = 5.0;
  std::string sp_kernel = "rod";
  bool sp_save_field = false;
  CLI::App* sp = app.add_subcommand(
      "spatial", "full kinetic model on the periodic square");
  sp->add_option("--kernel", sp_kernel, "rod | maxwell")->default_str("rod");
  sp->add_option("--nx", sp_cfg.nx, "x cells")->default_str("32");
  sp->add_option("--ny", sp_cfg.ny, "y cells")->default_str("32");
  sp->add_option("--n", sp_cfg.n, "angular half-resolution (odd)")->default_str("25");
  sp->add_option("--mass", sp_cfg.mass, "total mass")->default_str("1");
  sp->add_option("--mu", sp_cfg.mu, "angular diffusivity")->default_str("8");
  sp->add_option("--dt", sp_cfg.dt, "time step (0 = auto)")->default_str("0");
  sp->add_option("--safety", sp_cfg.safety, "fraction of the stability bound")
      ->default_str("0.9");
  sp->add_option("--t-end", sp_cfg.t_end, "final time")->default_str("5");
  sp->add_option("--cadence", sp_cfg.output_cadence,
                 "steps between decay records")->default_str("10");
  sp->add_option("--perturbation", sp_cfg.perturbation,
                 "relative amplitude of the initial noise")->default_str("0.01");
  sp->add_flag("--save-field", sp_save_field, "write the final field snapshot");
  add_common(sp, sp_common);

  // ---- compare-smallmu ----
  CommonArgs cs_common;
  int cs_n = 51;
  double cs_mu = 0.001, cs_mass = 1.0;
  myxo::SmallMuOptions cs_opts;
  CLI::App* cs = app.add_subcommand(
      "compare-smallmu",
      "equilibrium vs rescaled fixed-point profile (maxwell kernel)");
  cs->add_option("--mu", cs_mu, "angular diffusivity (well below mu*)")
      ->default_str("0.001");
  cs->add_option("--n", cs_n, "angular half-resolution (odd)")->default_str("51");
  cs->add_option("--mass", cs_mass, "total mass")->default_str("1");
  cs->add_option("--R", cs_opts.line_radius, "line truncation radius")
      ->default_str("16");
  cs->add_option("--N", cs_opts.line_nodes, "line nodes (odd)")->default_str("1601");
  cs->add_option("--tol", cs_opts.picard_tol, "Picard sup-residual tolerance")
      ->default_str("1e-8");
  cs->add_option("--t-max", cs_opts.t_max, "equilibration time cap")
      ->default_str("20000");
  cs->add_option("--tol-eq", cs_opts.tol_eq, "stationarity tolerance (times mass)")
      ->default_str("1e-9");
  add_common(cs, cs_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  CLI::App* active = app.get_subcommands().front();
  CommonArgs* common = nullptr;
  if (active == sim) common = &sim_common;
  else if (active == spec) common = &spec_common;
  else if (active == bif) common = &bif_common;
  else if (active == fp) common = &fp_common;
  else if (active == sp) common = &sp_common;
  else common = &cs_common;

  try {
    apply_config_file(active, common->config_file);
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (common->threads > 0) omp_set_num_threads(common->threads);
  fs::path dir(common->out_dir);
  Timer timer;

  try {
    if (active == sim) {
      sim_cfg.kernel = myxo::kernel_from_name(sim_kernel);
      sim_cfg.seed = sim_common.seed;
      sim_cfg.snapshot_times = {0.0, 0.5 * sim_cfg.t_end, sim_cfg.t_end};
      myxo::AngularGrid grid = myxo::make_grid(sim_cfg.n);
      myxo::DistributionState init = myxo::make_initial(
          grid, sim_cfg.mass, parse_initial(sim_init, sim_common.seed));
      myxo::Trajectory traj = myxo::run(sim_cfg, init);
      myxo::write_trajectory_csv(dir / "trajectory.csv", traj.rows);
      const char* names[] = {"profile_initial.csv", "profile_mid.csv",
                             "profile_final.csv"};
      std::vector<std::string> outputs = {"trajectory.csv"};
      for (std::size_t i = 0; i < traj.snapshots.size() && i < 3; ++i) {
        myxo::write_profile_csv(dir / names[i], grid, traj.snapshots[i].f);
        outputs.push_back(names[i]);
      }
      write_metadata(dir, "simulate", config_echo(sim), sim_common.seed,
                     timer.seconds(), outputs);
    } else if (active == spec) {
      myxo::AngularGrid grid = myxo::make_grid(spec_n);
      std::vector<int> modes;
      for (int m = 1; m <= spec_max_mode; ++m) modes.push_back(m);
      myxo::SpectrumReport report = myxo::numeric_spectrum(
          grid, myxo::kernel_from_name(spec_kernel), spec_mu, spec_mass, modes);
      myxo::write_spectrum_csv(dir / "spectrum.csv", report);
      json summary;
      summary["mu_star_closed"] = report.mu_star_closed;
      summary["mu_star_numeric"] = report.mu_star_numeric;
      summary["kernel"] = spec_kernel;
      summary["n"] = spec_n;
      summary["mass"] = spec_mass;
      myxo::ensure_directory(dir);
      std::ofstream(dir / "summary.json", std::ios::binary)
          << summary.dump(2) << '\n';
      write_metadata(dir, "spectrum", config_echo(spec), spec_common.seed,
                     timer.seconds(), {"spectrum.csv", "summary.json"});
    } else if (active == bif) {
      myxo::SimConfig tpl;
      tpl.n = bif_n;
      tpl.kernel = myxo::kernel_from_name(bif_kernel);
      tpl.mass = bif_mass;
      tpl.output_cadence = 1000;
      myxo::SweepOptions opts;
      opts.t_max = bif_tmax;
      opts.tol_eq = bif_toleq;
      std::vector<double> mus;
      if (!bif_mu_list.empty()) {
        mus = parse_double_list(bif_mu_list);
      } else {
        myxo::AngularGrid grid = myxo::make_grid(bif_n);
        double mu_star_num =
            myxo::numeric_critical_mu(grid, tpl.kernel, bif_mass);
        double mu_star = myxo::critical_mu(tpl.kernel, bif_mass);
        for (double x : parse_double_list(bif_offsets)) {
          mus.push_back(mu_star_num - x * mu_star);
        }
        mus.push_back(1.2 * mu_star);  // one supercritical row
      }
      if (mus.empty()) throw std::invalid_argument("bifurcate: empty mu list");
      myxo::SweepTable table =
          myxo::amplitude_sweep(mus, tpl, bif_common.seed, opts);
      myxo::write_sweep_csv(dir / "sweep.csv", table);
      myxo::write_diagram_csv(dir / "diagram.csv", table);
      json summary;
      summary["mu_star_reference"] = table.mu_star_reference;
      summary["fitted_slope"] = table.fitted_slope;
      summary["subcritical_rows"] = table.subcritical_rows;
      myxo::ensure_directory(dir);
      std::ofstream(dir / "summary.json", std::ios::binary)
          << summary.dump(2) << '\n';
      write_metadata(dir, "bifurcate", config_echo(bif), bif_common.seed,
                     timer.seconds(), {"sweep.csv", "diagram.csv", "summary.json"});
    } else if (active == fp) {
      myxo::LineGrid grid = myxo::make_line_grid(fp_R, fp_N);
      myxo::PicardResult result = myxo::picard_solve(
          grid, myxo::gaussian_seed(grid), fp_omega, fp_tol, fp_maxit);
      if (!result.converged) {
        std::cerr << "fixedpoint: no convergence in " << fp_maxit
                  << " iterations (residual " << result.sup_residual << ")\n";
      }
      myxo::write_line_profile_csv(dir / "profile.csv", grid, result.profile);
      myxo::write_residuals_csv(dir / "residuals.csv", result.history);
      write_metadata(dir, "fixedpoint", config_echo(fp), fp_common.seed,
                     timer.seconds(), {"profile.csv", "residuals.csv"});
      if (!result.converged) return kExitNumerical;
    } else if (active == sp) {
      sp_cfg.kernel = myxo::kernel_from_name(sp_kernel);
      sp_cfg.seed = sp_common.seed;
      myxo::KineticField init = myxo::make_perturbed_field(sp_cfg);
      myxo::SpatialRunResult result = myxo::run_spatial(sp_cfg, std::move(init));
      myxo::write_decay_csv(dir / "decay.csv", result.rows);
      std::vector<std::string> outputs = {"decay.csv"};
      if (sp_save_field) {
        myxo::write_field_binary(dir / "field_final.bin",
                                 dir / "field_final.json", result.final_field);
        outputs.push_back("field_final.bin");
        outputs.push_back("field_final.json");
      }
      write_metadata(dir, "spatial", config_echo(sp), sp_common.seed,
                     timer.seconds(), outputs);
    } else {
      myxo::AngularGrid grid = myxo::make_grid(cs_n);
      myxo::SmallMuComparison cmp =
          myxo::compare_small_mu(cs_mu, cs_mass, grid, cs_opts);
      myxo::write_comparison_csv(dir / "comparison.csv", grid,
                                 cmp.f_equilibrium, cmp.f_rescaled);
      myxo::write_residuals_csv(dir / "residuals.csv", cmp.picard.history);
      json summary;
      summary["rel_l1_error"] = cmp.rel_l1_error;
      summary["m_left"] = cmp.m_left;
      summary["m_right"] = cmp.m_right;
      summary["equilibrated"] = cmp.equilibrated;
      summary["t_equilibrate"] = cmp.t_equilibrate;
      myxo::ensure_directory(dir);
      std::ofstream(dir / "summary.json", std::ios::binary)
          << summary.dump(2) << '\n';
      write_metadata(dir, "compare-smallmu", config_echo(cs), cs_common.seed,
                     timer.seconds(),
                     {"comparison.csv", "residuals.csv", "summary.json"});
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const myxo::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
