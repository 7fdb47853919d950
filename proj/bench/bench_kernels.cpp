// Timing comparison of the OpenMP kernels against their serial reference
// implementations. Not a test; build target `bench_kernels`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <omp.h>
#include <vector>

#include "myxo/collision.hpp"
#include "myxo/fixedpoint.hpp"
#include "myxo/rng.hpp"
#include "myxo/spatial.hpp"

using namespace myxo;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start).count();
  return 1e3 * s / reps;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::fabs(a[i] - b[i]));
  }
  return d;
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", omp_get_max_threads());
  std::printf("%-28s %10s %10s %8s %10s\n", "kernel", "serial ms", "omp ms",
              "speedup", "max diff");

  Rng rng(1);
  for (int n : {51, 151, 301}) {
    AngularGrid g = make_grid(n);
    std::vector<double> f(g.num_points), out(g.num_points);
    for (double& v : f) v = rng.uniform();
    CollisionOperator op(g, Kernel::rod);
    int reps = 20000 / n;
    double t_ref = time_ms([&] { out = collide_bilinear_serial(g, Kernel::rod, f, f); }, reps);
    std::vector<double> ref = out;
    double t_omp = time_ms([&] { op.apply(f, out); }, reps);
    char name[64];
    std::snprintf(name, sizeof(name), "collide n=%d", n);
    std::printf("%-28s %10.4f %10.4f %8.2f %10.2e\n", name, t_ref, t_omp,
                t_ref / t_omp, max_diff(ref, out));
  }

  for (int N : {801, 1601}) {
    LineGrid g = make_line_grid(16.0, N);
    auto F = gaussian_seed(g);
    SMapResult ref, fast;
    double t_ref = time_ms([&] { ref = s_map_serial(g, F); }, 3);
    double t_omp = time_ms([&] { fast = s_map(g, F); }, 3);
    char name[64];
    std::snprintf(name, sizeof(name), "s_map N=%d", N);
    std::printf("%-28s %10.4f %10.4f %8.2f %10.2e\n", name, t_ref, t_omp,
                t_ref / t_omp, max_diff(ref.F, fast.F));
  }

  {
    SpatialConfig cfg;
    cfg.nx = cfg.ny = 32;
    cfg.n = 25;
    cfg.mu = 8.0;
    cfg.seed = 2;
    KineticField a = make_perturbed_field(cfg);
    KineticField b = a;
    CollisionOperator op(a.grid, cfg.kernel);
    double dt = 0.9 * spatial_dt_bound(a, cfg.mu, cfg.mass);
    int prev = omp_get_max_threads();
    omp_set_num_threads(1);
    double t_ser = time_ms([&] { spatial_step(a, op, cfg.mu, dt); }, 10);
    omp_set_num_threads(prev);
    double t_omp = time_ms([&] { spatial_step(b, op, cfg.mu, dt); }, 10);
    std::printf("%-28s %10.4f %10.4f %8.2f %10s\n", "spatial_step 32x32 n=25",
                t_ser, t_omp, t_ser / t_omp, "(1 vs k)");
  }
  return 0;
}
