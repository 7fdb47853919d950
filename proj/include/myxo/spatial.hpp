#ifndef MYXO_SPATIAL_HPP
#define MYXO_SPATIAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "myxo/homogeneous.hpp"

namespace myxo {

/// Density f(x, y, phi) on the periodic lattice [0,2pi)^2 x angular grid.
/// Layout: ix-major, then iy, then k.
struct KineticField {
  int nx = 0, ny = 0;
  AngularGrid grid;
  double dx = 0.0, dy = 0.0;
  std::vector<double> values;

  std::size_t index(int ix, int iy, int k) const {
    return (static_cast<std::size_t>(ix) * ny + iy) * grid.num_points + k;
  }
  double& at(int ix, int iy, int k) { return values[index(ix, iy, k)]; }
  double at(int ix, int iy, int k) const { return values[index(ix, iy, k)]; }
  std::span<double> cell(int ix, int iy) {
    return {values.data() + index(ix, iy, 0),
            static_cast<std::size_t>(grid.num_points)};
  }
  std::span<const double> cell(int ix, int iy) const {
    return {values.data() + index(ix, iy, 0),
            static_cast<std::size_t>(grid.num_points)};
  }
  double mass() const;
};

KineticField make_field(int nx, int ny, const AngularGrid& grid, double fill);

/// First-order dimension-by-dimension upwind transport with velocity
/// (cos phi_k, sin phi_k) per angular slice, periodic in x and y,
/// conservative flux form. Rejects dt violating the advective CFL
/// condition dt (|cos phi_k|/dx + |sin phi_k|/dy) <= 1.
void transport_step(KineticField& field, double dt);

/// Diffusion + collision update applied cell by cell (no transport).
void local_step(KineticField& field, const CollisionOperator& op, double mu,
                double dt);

/// Lie splitting: transport_step(dt) then local_step(dt).
void spatial_step(KineticField& field, const CollisionOperator& op, double mu,
                  double dt);

double l2_distance_to_uniform(const KineticField& field, double mass);

struct SpatialConfig {
  int nx = 32, ny = 32;
  int n = 25;
  Kernel kernel = Kernel::rod;
  double mu = 0.0;
  double mass = 1.0;
  double dt = 0.0;  // <= 0: min(auto_dt, advective CFL) * safety
  double safety = 0.9;
  double t_end = 0.0;
  int output_cadence = 10;
  std::uint64_t seed = 0;
  double perturbation = 0.01;
};

struct DecayRow {
  double t = 0.0;
  double mass = 0.0;
  double l2_dist = 0.0;
};

struct SpatialRunResult {
  std::vector<DecayRow> rows;
  KineticField final_field;
  double dt = 0.0;
  long steps = 0;
};

/// Largest dt stable for both sub-steps (before the safety factor).
double spatial_dt_bound(const KineticField& field, double mu, double mass);

KineticField make_perturbed_field(const SpatialConfig& config);

SpatialRunResult run_spatial(const SpatialConfig& config, KineticField initial);

/// Least-squares slope of log(distance) against t over times in
/// [t_begin, t_end], sign-flipped. Throws std::domain_error on non-positive
/// distances in the window or fewer than two points.
double fit_decay_rate(std::span<const double> times,
                      std::span<const double> distances, double t_begin,
                      double t_end);

}  // namespace myxo

#endif
