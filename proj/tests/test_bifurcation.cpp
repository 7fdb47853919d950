#include <doctest.h>

#include <cmath>

#include "myxo/bifurcation.hpp"
#include "myxo/spectral.hpp"

using namespace myxo;

TEST_CASE("predicted_amplitude") {
  double mu_star = 1.0 / (12.0 * M_PI);
  CHECK(predicted_amplitude(mu_star, 1.0) == 0.0);
  CHECK(predicted_amplitude(0.05, 1.0) == 0.0);
  CHECK(predicted_amplitude(0.02, 1.0) == doctest::Approx(0.1746).epsilon(1e-3));
  CHECK(predicted_amplitude(0.02, 1.0) ==
        doctest::Approx(std::sqrt(220.0 * (mu_star - 0.02) / (15.0 * M_PI)))
            .epsilon(1e-15));

  // square-root law: quadrupling the offset doubles the amplitude, exactly
  // (a power-of-two offset keeps mu* - eps representable)
  double eps = 0x1.0p-20;
  CHECK(predicted_amplitude(mu_star - 4.0 * eps, 1.0) ==
        2.0 * predicted_amplitude(mu_star - eps, 1.0));
}

TEST_CASE("equilibrate: supercritical random data settle on uniform") {
  SimConfig cfg;
  cfg.n = 51;
  cfg.mu = 0.03;
  cfg.output_cadence = 500;
  AngularGrid g = make_grid(cfg.n);
  auto init = make_initial(g, 1.0, UniformRandom{0.01, 31});
  EquilibrateResult eq = equilibrate(cfg, init, 1e-9, 4000.0);
  CHECK(eq.converged);
  auto [a2, b2] = fourier_mode(g, eq.state.f, 2);
  CHECK(std::hypot(a2, b2) <= 1e-5);
  // residual history decreases overall
  CHECK(eq.residual_history.back().second <
        0.01 * eq.residual_history.front().second);
}

TEST_CASE("equilibrate: subcritical random data reach opposite equal peaks") {
  SimConfig cfg;
  cfg.n = 51;
  cfg.mu = 0.02;
  cfg.output_cadence = 500;
  AngularGrid g = make_grid(cfg.n);
  auto init = make_initial(g, 1.0, UniformRandom{0.01, 31});
  EquilibrateResult eq = equilibrate(cfg, init, 1e-12, 4000.0);
  CHECK(eq.converged);
  auto [k1, k2] = find_opposite_peaks(g, eq.state.f);
  CHECK(std::abs(signed_distance(g, k1, k2)) >= g.n - 1);
  double f0 = 1.0 / (2.0 * M_PI);
  CHECK(std::fabs(eq.state.f[k1] - eq.state.f[k2]) <= 1e-6 * f0);
}

TEST_CASE("equilibrate: mu = 0 opposite point masses converge immediately") {
  SimConfig cfg;
  cfg.n = 25;
  cfg.mu = 0.0;
  AngularGrid g = make_grid(cfg.n);
  auto init = make_initial(g, 1.0, PointMasses{{{2, 0.5}, {2 + 25, 0.5}}});
  EquilibrateResult eq = equilibrate(cfg, init, 1e-9, 100.0);
  CHECK(eq.converged);
  CHECK(eq.t_reached == 0.0);
  CHECK(eq.residual_inf == 0.0);
}

TEST_CASE("rotated initial data give rotated equilibria") {
  SimConfig cfg;
  cfg.n = 25;
  cfg.mu = 0.018;
  AngularGrid g = make_grid(cfg.n);
  auto base = make_initial(g, 1.0, UniformRandom{0.02, 8});
  const int shift = 9;
  DistributionState rotated;
  rotated.f.resize(g.num_points);
  for (int k = 0; k < g.num_points; ++k) {
    rotated.f[k] = base.f[g.wrap(k - shift)];
  }
  EquilibrateResult eq1 = equilibrate(cfg, base, 1e-10, 3000.0);
  EquilibrateResult eq2 = equilibrate(cfg, rotated, 1e-10, 3000.0);
  REQUIRE(eq1.converged);
  REQUIRE(eq2.converged);
  // shift equivariance is bitwise, so the whole trajectory rotates
  for (int k = 0; k < g.num_points; ++k) {
    CHECK(eq2.state.f[g.wrap(k + shift)] == eq1.state.f[k]);
  }
}

TEST_CASE("small sweep: amplitudes follow the branch") {
  SimConfig tpl;
  tpl.n = 51;
  tpl.output_cadence = 1000;
  AngularGrid g = make_grid(tpl.n);
  double mu_star_num = numeric_critical_mu(g, Kernel::rod, 1.0);
  double mu_star = critical_mu(Kernel::rod, 1.0);

  std::vector<double> mus = {mu_star_num - 0.04 * mu_star,
                             mu_star_num - 0.1 * mu_star, 1.2 * mu_star};
  SweepOptions opts;
  opts.t_max = 2e4;
  SweepTable table = amplitude_sweep(mus, tpl, 0, opts);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.mu_star_reference == doctest::Approx(mu_star_num).epsilon(1e-12));
  CHECK(table.subcritical_rows == 2);

  // rows sorted by mu; the supercritical row relaxes to uniform
  CHECK(table.rows[0].mu < table.rows[1].mu);
  CHECK(table.rows[2].amplitude <= 1e-5);
  for (int i : {0, 1}) {
    const SweepRow& row = table.rows[i];
    CHECK(row.converged);
    double offset = mu_star_num - row.mu;
    double local = std::sqrt(220.0 * offset / (15.0 * M_PI));
    CHECK(row.amplitude == doctest::Approx(local).epsilon(0.08));
    CHECK(std::abs(signed_distance(g, row.peak_index, row.opposite_peak_index)) >=
          g.n - 1);
  }
  // amplitude ratio across a 2.5x offset ratio: square-root scaling
  // (rows are sorted by mu, so rows[0] carries the larger offset)
  double ratio = table.rows[0].amplitude / table.rows[1].amplitude;
  CHECK(ratio == doctest::Approx(std::sqrt(2.5)).epsilon(0.05));
}
