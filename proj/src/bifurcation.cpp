#include "myxo/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "myxo/spectral.hpp"

namespace myxo {

EquilibrateResult equilibrate(const SimConfig& config,
                              const DistributionState& initial, double tol_eq,
                              double t_max) {
  AngularGrid grid = make_grid(config.n);
  CollisionOperator op(grid, config.kernel);
  const double dt = config.dt > 0.0
                        ? config.dt
                        : auto_dt(grid, config.mu, config.mass, config.safety);
  const double tol = tol_eq * config.mass;
  const int history_cadence = std::max(1, config.output_cadence);

  EquilibrateResult result;
  result.state = initial;
  std::vector<double> rhs(grid.num_points);

  long steps = 0;
  double resid = homogeneous_rhs(op, config.mu, result.state.f, rhs);
  result.residual_history.emplace_back(result.state.t, resid);
  while (resid > tol && result.state.t < t_max) {
    step(result.state, op, config.mu, dt);
    ++steps;
    resid = homogeneous_rhs(op, config.mu, result.state.f, rhs);
    if (steps % history_cadence == 0) {
      result.residual_history.emplace_back(result.state.t, resid);
    }
  }
  result.residual_history.emplace_back(result.state.t, resid);
  result.converged = resid <= tol;
  result.t_reached = result.state.t;
  result.residual_inf = resid;
  return result;
}

double predicted_amplitude(double mu, double mass) {
  const double mu_star = mass / (12.0 * M_PI);
  if (mu >= mu_star) return 0.0;
  return std::sqrt(220.0 * mass * (mu_star - mu) / (15.0 * M_PI));
}

std::pair<int, int> find_opposite_peaks(const AngularGrid& grid,
                                        std::span<const double> f) {
  int k1 = 0;
  for (int k = 1; k < grid.num_points; ++k) {
    if (f[k] > f[k1]) k1 = k;
  }
  int k2 = -1;
  for (int k = 0; k < grid.num_points; ++k) {
    if (std::abs(signed_distance(grid, k1, k)) > grid.n / 2 &&
        (k2 < 0 || f[k] > f[k2])) {
      k2 = k;
    }
  }
  return {k1, k2};
}

SweepTable amplitude_sweep(std::span<const double> mu_list,
                           const SimConfig& tpl, std::uint64_t seed,
                           const SweepOptions& opts) {
  AngularGrid grid = make_grid(tpl.n);
  const double f0 = tpl.mass / (2.0 * M_PI);

  SweepTable table;
  table.mu_star_reference =
      opts.mu_star_reference > 0.0
          ? opts.mu_star_reference
          : numeric_critical_mu(grid, tpl.kernel, tpl.mass);
  table.rows.resize(mu_list.size());

  // deterministic seed state: f0 (1 + 1e-3 sin(2 phi)) pins the rotation
  // phase, so amplitudes are comparable across rows
  DistributionState seed_state;
  seed_state.f.resize(grid.num_points);
  for (int k = 0; k < grid.num_points; ++k) {
    seed_state.f[k] = f0 * (1.0 + 1e-3 * std::sin(2.0 * grid.angle(k)));
  }

  std::vector<double> mus(mu_list.begin(), mu_list.end());
  std::sort(mus.begin(), mus.end());

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < mus.size(); ++i) {
    SimConfig cfg = tpl;
    cfg.mu = mus[i];
    cfg.seed = seed;
    EquilibrateResult eq =
        equilibrate(cfg, seed_state, opts.tol_eq, opts.t_max);
    auto [a2, b2] = fourier_mode(grid, eq.state.f, 2);
    auto [p1, p2] = find_opposite_peaks(grid, eq.state.f);
    SweepRow row;
    row.mu = cfg.mu;
    row.converged = eq.converged;
    row.t_equilibrate = eq.t_reached;
    row.amplitude = std::hypot(a2, b2);
    row.predicted = predicted_amplitude(cfg.mu, cfg.mass);
    row.peak_index = p1;
    row.opposite_peak_index = p2;
    table.rows[i] = row;
  }

  // log-log slope over the subcritical rows
  double sx = 0.0, sy = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (const SweepRow& row : table.rows) {
    double offset = table.mu_star_reference - row.mu;
    if (offset > 0.0 && row.amplitude > 0.0) {
      pts.emplace_back(std::log(offset), std::log(row.amplitude));
      sx += pts.back().first;
      sy += pts.back().second;
    }
  }
  table.subcritical_rows = static_cast<int>(pts.size());
  if (pts.size() >= 2) {
    double mx = sx / pts.size(), my = sy / pts.size();
    double cov = 0.0, var = 0.0;
    for (auto [x, y] : pts) {
      cov += (x - mx) * (y - my);
      var += (x - mx) * (x - mx);
    }
    table.fitted_slope = cov / var;
  }
  return table;
}

}  // namespace myxo
