// Behavioral tests of the myxo CLI: exit codes, file layout, config echo,
// deterministic reruns. argv[1] is the binary path.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int failures = 0;
std::string g_cli;

void check(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++failures;
}

int run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-myxo-cli>\n");
    return 2;
  }
  g_cli = argv[1];
  fs::path base = fs::temp_directory_path() / "myxo_cli_tests";
  fs::remove_all(base);

  // config errors exit with 2
  check(run_cli("simulate --n 50 --t-end 1 --out " + (base / "bad").string()) == 2,
        "even n is a config error (exit 2)");
  check(run_cli("simulate --kernel disk --t-end 1 --out " + (base / "bad").string()) == 2,
        "unknown kernel is a config error (exit 2)");
  check(run_cli("simulate --dt 99 --t-end 1 --out " + (base / "bad").string()) == 2,
        "dt beyond the stability bound is a config error (exit 2)");
  check(run_cli("simulate --init bogus:1 --t-end 1 --out " + (base / "bad").string()) == 2,
        "malformed --init is a config error (exit 2)");
  check(run_cli("nonsense") == 2, "unknown subcommand is a config error (exit 2)");

  // numerical failures exit with 3 (variance drift on a tiny truncation)
  check(run_cli("fixedpoint --R 2 --N 201 --out " + (base / "num").string()) == 3,
        "fixed-point variance drift is a numerical failure (exit 3)");

  // a small simulate run produces the documented files
  fs::path sim = base / "sim";
  check(run_cli("simulate --mu 0.02 --n 31 --init random:1e-2 --seed 3 "
                "--t-end 20 --cadence 10 --out " + sim.string()) == 0,
        "simulate exits 0");
  check(fs::exists(sim / "trajectory.csv"), "trajectory.csv written");
  check(fs::exists(sim / "profile_initial.csv") &&
            fs::exists(sim / "profile_mid.csv") &&
            fs::exists(sim / "profile_final.csv"),
        "profile snapshots written");
  check(fs::exists(sim / "metadata.json"), "metadata.json written");
  {
    std::string header = slurp(sim / "trajectory.csv");
    check(header.rfind("t,mass,l2_dist_uniform,a1,b1,a2,b2,a3,b3,a4,b4,a5,"
                       "b5,a6,b6,m_left,m_right\n", 0) == 0,
          "trajectory header matches the contract");
  }
  {
    json meta = json::parse(slurp(sim / "metadata.json"));
    check(meta["rng"] == "mt19937_64/canonical53", "metadata names the RNG");
    check(meta.contains("version") && meta.contains("wall_time_s"),
          "metadata has version and wall time");
    check(meta["config"]["seed"] == "3", "metadata echoes the seed");
  }

  // same seed -> byte-identical CSVs
  fs::path sim2 = base / "sim2";
  run_cli("simulate --mu 0.02 --n 31 --init random:1e-2 --seed 3 --t-end 20 "
          "--cadence 10 --out " + sim2.string());
  check(slurp(sim / "trajectory.csv") == slurp(sim2 / "trajectory.csv") &&
            slurp(sim / "profile_final.csv") == slurp(sim2 / "profile_final.csv"),
        "rerun with the same seed is byte-identical");

  // the metadata config block reproduces the run when fed back in
  fs::path sim3 = base / "sim3";
  check(run_cli("simulate --config " + (sim / "metadata.json").string() +
                " --out " + sim3.string()) == 0,
        "metadata.json is accepted as --config");
  check(slurp(sim / "trajectory.csv") == slurp(sim3 / "trajectory.csv"),
        "config echo reproduces the run");

  // flags override config-file values
  fs::path sim4 = base / "sim4";
  check(run_cli("simulate --config " + (sim / "metadata.json").string() +
                " --seed 4 --out " + sim4.string()) == 0,
        "flag + config run exits 0");
  check(slurp(sim / "trajectory.csv") != slurp(sim4 / "trajectory.csv"),
        "explicit flag overrides the config file");

  // spectrum summary carries the thresholds
  fs::path spec = base / "spec";
  check(run_cli("spectrum --kernel rod --mass 1 --out " + spec.string()) == 0,
        "spectrum exits 0");
  {
    json summary = json::parse(slurp(spec / "summary.json"));
    double mu_star = summary["mu_star_closed"];
    check(std::abs(mu_star - 0.0265) < 2e-4, "summary mu* close to 0.0265");
    std::string header = slurp(spec / "spectrum.csv");
    check(header.rfind("mode,lambda_closed,lambda_numeric,abs_err,rel_err\n",
                       0) == 0,
          "spectrum header matches the contract");
  }

  fs::remove_all(base);
  std::printf("%s\n", failures == 0 ? "all cli tests passed" : "FAILURES");
  return failures == 0 ? 0 : 1;
}
