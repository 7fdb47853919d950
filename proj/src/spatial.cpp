#include "myxo/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "myxo/rng.hpp"

namespace myxo {

double KineticField::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * dx * dy * grid.delta_phi;
}

KineticField make_field(int nx, int ny, const AngularGrid& grid, double fill) {
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument("kinetic field: need nx, ny >= 2");
  }
  KineticField field;
  field.nx = nx;
  field.ny = ny;
  field.grid = grid;
  field.dx = 2.0 * M_PI / nx;
  field.dy = 2.0 * M_PI / ny;
  field.values.assign(static_cast<std::size_t>(nx) * ny * grid.num_points, fill);
  return field;
}

void transport_step(KineticField& field, double dt) {
  const int nx = field.nx, ny = field.ny, N = field.grid.num_points;
  for (int k = 0; k < N; ++k) {
    double cfl = std::fabs(std::cos(field.grid.angle(k))) / field.dx +
                 std::fabs(std::sin(field.grid.angle(k))) / field.dy;
    // 1e-12 slack admits dt sitting exactly on the bound (dt = dx slices)
    if (dt * cfl > 1.0 + 1e-12) {
      throw std::invalid_argument("transport: dt violates the advective CFL "
                                  "condition");
    }
  }

  // x sweep, upwind flux form per angular slice
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < N; ++k) {
    for (int iy = 0; iy < ny; ++iy) {
      double c = std::cos(field.grid.angle(k)) * dt / field.dx;
      std::vector<double> row(nx);
      for (int ix = 0; ix < nx; ++ix) row[ix] = field.at(ix, iy, k);
      if (c >= 0.0) {
        for (int ix = 0; ix < nx; ++ix) {
          field.at(ix, iy, k) = row[ix] - c * (row[ix] - row[(ix + nx - 1) % nx]);
        }
      } else {
        for (int ix = 0; ix < nx; ++ix) {
          field.at(ix, iy, k) = row[ix] - c * (row[(ix + 1) % nx] - row[ix]);
        }
      }
    }
  }

  // y sweep
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < N; ++k) {
    for (int ix = 0; ix < nx; ++ix) {
      double c = std::sin(field.grid.angle(k)) * dt / field.dy;
      std::vector<double> col(ny);
      for (int iy = 0; iy < ny; ++iy) col[iy] = field.at(ix, iy, k);
      if (c >= 0.0) {
        for (int iy = 0; iy < ny; ++iy) {
          field.at(ix, iy, k) = col[iy] - c * (col[iy] - col[(iy + ny - 1) % ny]);
        }
      } else {
        for (int iy = 0; iy < ny; ++iy) {
          field.at(ix, iy, k) = col[iy] - c * (col[(iy + 1) % ny] - col[iy]);
        }
      }
    }
  }
}

void local_step(KineticField& field, const CollisionOperator& op, double mu,
                double dt) {
  const int nx = field.nx, ny = field.ny, N = field.grid.num_points;
  const double inv_dphi2 =
      1.0 / (field.grid.delta_phi * field.grid.delta_phi);
#pragma omp parallel
  {
    // per-thread buffers keep the cell loop allocation-free
    std::vector<double> rhs(N);
    CollisionOperator::Scratch scratch;
#pragma omp for collapse(2) schedule(static)
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) {
        std::span<double> f = field.cell(ix, iy);
        op.apply(f, rhs, scratch);
        for (int k = 0; k < N; ++k) {
          double lap =
              (f[(k + 1) % N] - 2.0 * f[k] + f[(k + N - 1) % N]) * inv_dphi2;
          rhs[k] += mu * lap;
        }
        for (int k = 0; k < N; ++k) f[k] += dt * rhs[k];
      }
    }
  }
}

void spatial_step(KineticField& field, const CollisionOperator& op, double mu,
                  double dt) {
  transport_step(field, dt);
  local_step(field, op, mu, dt);
}

double l2_distance_to_uniform(const KineticField& field, double mass) {
  // mass is the total over T^2 x T^1; the uniform density is mass/(2pi)^3
  const double f0 = mass / (8.0 * M_PI * M_PI * M_PI);
  double s = 0.0;
  for (double v : field.values) s += (v - f0) * (v - f0);
  return std::sqrt(s * field.dx * field.dy * field.grid.delta_phi);
}

double spatial_dt_bound(const KineticField& field, double mu, double mass) {
  double bound = auto_dt(field.grid, mu, mass, 1.0);
  for (int k = 0; k < field.grid.num_points; ++k) {
    double cfl = std::fabs(std::cos(field.grid.angle(k))) / field.dx +
                 std::fabs(std::sin(field.grid.angle(k))) / field.dy;
    if (cfl > 0.0) bound = std::min(bound, 1.0 / cfl);
  }
  return bound;
}

KineticField make_perturbed_field(const SpatialConfig& config) {
  AngularGrid grid = make_grid(config.n);
  const double f0 = config.mass / (8.0 * M_PI * M_PI * M_PI);
  KineticField field = make_field(config.nx, config.ny, grid, f0);
  Rng rng(config.seed);
  for (double& v : field.values) {
    v = f0 * (1.0 + config.perturbation * rng.uniform_pm1());
  }
  double m = field.mass();
  double scale = config.mass / m;
  for (double& v : field.values) v *= scale;
  return field;
}

SpatialRunResult run_spatial(const SpatialConfig& config, KineticField initial) {
  CollisionOperator op(initial.grid, config.kernel);
  double dt = config.dt;
  if (dt <= 0.0) {
    dt = config.safety * spatial_dt_bound(initial, config.mu, config.mass);
  } else if (dt > spatial_dt_bound(initial, config.mu, config.mass)) {
    throw std::invalid_argument("run_spatial: explicit dt violates the "
                                "stability bounds");
  }

  SpatialRunResult result;
  result.dt = dt;
  KineticField field = std::move(initial);
  double t = 0.0;
  auto record = [&]() {
    result.rows.push_back({t, field.mass(),
                           l2_distance_to_uniform(field, config.mass)});
  };
  record();
  const int cadence = std::max(1, config.output_cadence);
  long steps = 0;
  while (t < config.t_end &&
         config.t_end - t > 1e-12 * std::max(1.0, config.t_end)) {
    double dt_now = std::min(dt, config.t_end - t);
    spatial_step(field, op, config.mu, dt_now);
    t += dt_now;
    ++steps;
    if (steps % cadence == 0) record();
  }
  if (steps % cadence != 0) record();
  result.final_field = std::move(field);
  result.steps = steps;
  return result;
}

double fit_decay_rate(std::span<const double> times,
                      std::span<const double> distances, double t_begin,
                      double t_end) {
  if (times.size() != distances.size()) {
    throw std::invalid_argument("fit_decay_rate: size mismatch");
  }
  double sx = 0.0, sy = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_begin || times[i] > t_end) continue;
    if (!(distances[i] > 0.0)) {
      throw std::domain_error("fit_decay_rate: non-positive distance in the "
                              "fit window");
    }
    pts.emplace_back(times[i], std::log(distances[i]));
    sx += times[i];
    sy += pts.back().second;
  }
  if (pts.size() < 2) {
    throw std::domain_error("fit_decay_rate: fewer than two points in window");
  }
  double mx = sx / pts.size(), my = sy / pts.size();
  double cov = 0.0, var = 0.0;
  for (auto [x, y] : pts) {
    cov += (x - mx) * (y - my);
    var += (x - mx) * (x - mx);
  }
  return -cov / var;
}

}  // namespace myxo
