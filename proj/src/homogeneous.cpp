#include "myxo/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "myxo/rng.hpp"

namespace myxo {

double auto_dt(const AngularGrid& grid, double mu, double mass, double safety) {
  double diffusion_bound = std::numeric_limits<double>::infinity();
  if (mu > 0.0) {
    diffusion_bound = grid.delta_phi * grid.delta_phi / (2.0 * mu);
  }
  double collision_bound = 1.0 / (6.0 * mass);
  return safety * std::min(diffusion_bound, collision_bound);
}

double homogeneous_rhs(const CollisionOperator& op, double mu,
                       std::span<const double> f, std::span<double> rhs) {
  const AngularGrid& grid = op.grid();
  const int N = grid.num_points;
  op.apply(f, rhs);
  const double inv_dphi2 = 1.0 / (grid.delta_phi * grid.delta_phi);
  double resid = 0.0;
  for (int k = 0; k < N; ++k) {
    double lap = (f[(k + 1) % N] - 2.0 * f[k] + f[(k + N - 1) % N]) * inv_dphi2;
    rhs[k] += mu * lap;
    resid = std::max(resid, std::fabs(rhs[k]));
  }
  return resid;
}

StepStats step(DistributionState& state, const CollisionOperator& op,
               double mu, double dt) {
  const int N = op.grid().num_points;
  std::vector<double> rhs(N);
  StepStats stats;
  stats.pre_residual_inf = homogeneous_rhs(op, mu, state.f, rhs);

  std::vector<double> trial(N);
  double dt_try = dt;
  for (int halvings = 0; halvings <= 30; ++halvings) {
    bool nonneg = true;
    for (int k = 0; k < N; ++k) {
      trial[k] = state.f[k] + dt_try * rhs[k];
      if (trial[k] < 0.0) nonneg = false;
    }
    if (nonneg) {
      state.f.swap(trial);
      state.t += dt_try;
      stats.dt_used = dt_try;
      stats.halvings = halvings;
      return stats;
    }
    dt_try *= 0.5;
  }
  throw numerical_error("homogeneous step: negative density after 30 dt "
                        "halvings (unstable configuration)");
}

DistributionState make_initial(const AngularGrid& grid, double mass,
                               const InitialSpec& spec) {
  const int N = grid.num_points;
  const double f0 = mass / (2.0 * M_PI);
  DistributionState state;
  state.f.assign(N, 0.0);

  auto renormalize = [&](double target) {
    double m = mass_of(grid, state.f);
    if (m <= 0.0) {
      throw std::invalid_argument("initial data: nonpositive total mass");
    }
    double scale = target / m;
    for (double& v : state.f) v *= scale;
  };

  if (const auto* ur = std::get_if<UniformRandom>(&spec)) {
    if (ur->eps < 0.0) throw std::invalid_argument("initial data: eps < 0");
    Rng rng(ur->seed);
    for (int k = 0; k < N; ++k) state.f[k] = f0 * (1.0 + ur->eps * rng.uniform_pm1());
    if (ur->eps > 0.0) renormalize(mass);
    else std::fill(state.f.begin(), state.f.end(), f0);
  } else if (const auto* sp = std::get_if<SinglePoint>(&spec)) {
    if (sp->eps < 0.0) throw std::invalid_argument("initial data: eps < 0");
    std::fill(state.f.begin(), state.f.end(), f0);
    state.f[grid.wrap(sp->k0)] += sp->eps;
    renormalize(mass);
  } else if (const auto* pl = std::get_if<Plateaus>(&spec)) {
    if (pl->m1 < 0.0 || pl->m2 < 0.0) {
      throw std::invalid_argument("initial data: negative plateau mass");
    }
    auto contains = [](double begin, double end, double phi) {
      // membership of phi in the wrapped interval [begin, end)
      double b = std::fmod(begin, 2.0 * M_PI);
      if (b < 0.0) b += 2.0 * M_PI;
      double len = end - begin;
      double d = std::fmod(phi - b, 2.0 * M_PI);
      if (d < 0.0) d += 2.0 * M_PI;
      return d < len;
    };
    auto deposit = [&](double m, double begin, double end) {
      if (m == 0.0) return;
      std::vector<int> hit;
      for (int k = 0; k < N; ++k) {
        if (contains(begin, end, grid.angle(k))) hit.push_back(k);
      }
      if (hit.empty()) {
        throw std::invalid_argument("initial data: plateau interval contains "
                                    "no grid point");
      }
      double height = m / (static_cast<double>(hit.size()) * grid.delta_phi);
      for (int k : hit) state.f[k] += height;
    };
    deposit(pl->m1, pl->i1_begin, pl->i1_end);
    deposit(pl->m2, pl->i2_begin, pl->i2_end);
    renormalize(mass);
  } else {
    const auto& pm = std::get<PointMasses>(spec);
    for (const auto& [k, m] : pm.masses) {
      if (m < 0.0) throw std::invalid_argument("initial data: negative point mass");
      state.f[grid.wrap(k)] += m / grid.delta_phi;
    }
    renormalize(mass);
  }
  return state;
}

std::pair<double, double> fourier_mode(const AngularGrid& grid,
                                       std::span<const double> f, int m) {
  if (m < 1 || m >= grid.n) {
    throw std::invalid_argument("fourier_mode: need 1 <= m < n, got m = " +
                                std::to_string(m));
  }
  double a = 0.0, b = 0.0;
  for (int k = 0; k < grid.num_points; ++k) {
    a += f[k] * std::cos(m * grid.angle(k));
    b += f[k] * std::sin(m * grid.angle(k));
  }
  double w = grid.delta_phi / M_PI;
  return {a * w, b * w};
}

std::pair<double, double> half_interval_masses(const AngularGrid& grid,
                                               std::span<const double> f,
                                               int k0) {
  double first = 0.0, second = 0.0;
  for (int j = 0; j < grid.n; ++j) first += f[grid.wrap(k0 + j)];
  for (int j = grid.n; j < grid.num_points; ++j) second += f[grid.wrap(k0 + j)];
  return {first * grid.delta_phi, second * grid.delta_phi};
}

double l2_distance_to_uniform(const AngularGrid& grid, std::span<const double> f,
                              double mass) {
  const double f0 = mass / (2.0 * M_PI);
  double s = 0.0;
  for (double v : f) s += (v - f0) * (v - f0);
  return std::sqrt(s * grid.delta_phi);
}

namespace {

TrajectoryRow diagnostics_row(const AngularGrid& grid,
                              const DistributionState& state, double mass) {
  TrajectoryRow row;
  row.t = state.t;
  row.mass = mass_of(grid, state.f);
  row.l2_dist_uniform = l2_distance_to_uniform(grid, state.f, mass);
  for (int m = 1; m <= 6; ++m) {
    auto [a, b] = fourier_mode(grid, state.f, m);
    row.a[m - 1] = a;
    row.b[m - 1] = b;
  }
  auto [right, left] = half_interval_masses(grid, state.f, 0);
  row.m_right = right;
  row.m_left = left;
  return row;
}

}  // namespace

Trajectory run(const SimConfig& config, const DistributionState& initial) {
  AngularGrid grid = make_grid(config.n);
  if (static_cast<int>(initial.f.size()) != grid.num_points) {
    throw std::invalid_argument("run: initial state does not match grid");
  }
  CollisionOperator op(grid, config.kernel);
  double dt = config.dt > 0.0
                  ? config.dt
                  : auto_dt(grid, config.mu, config.mass, config.safety);
  if (dt > auto_dt(grid, config.mu, config.mass, 1.0)) {
    throw std::invalid_argument("run: explicit dt violates the stability bound");
  }

  Trajectory traj;
  traj.dt = dt;
  DistributionState state = initial;
  traj.rows.push_back(diagnostics_row(grid, state, config.mass));

  std::vector<double> snap_times = config.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;
  auto take_due_snapshots = [&]() {
    while (next_snap < snap_times.size() &&
           state.t >= snap_times[next_snap] - 0.5 * dt) {
      traj.snapshots.push_back({state.t, state.f});
      ++next_snap;
    }
  };
  take_due_snapshots();

  int cadence = std::max(1, config.output_cadence);
  long steps = 0;
  while (state.t < config.t_end &&
         config.t_end - state.t > 1e-12 * std::max(1.0, config.t_end)) {
    step(state, op, config.mu, std::min(dt, config.t_end - state.t));
    ++steps;
    take_due_snapshots();
    if (steps % cadence == 0) {
      traj.rows.push_back(diagnostics_row(grid, state, config.mass));
    }
  }
  if (steps % cadence != 0) {
    traj.rows.push_back(diagnostics_row(grid, state, config.mass));
  }
  traj.final_state = std::move(state);
  traj.steps = steps;
  return traj;
}

}  // namespace myxo
