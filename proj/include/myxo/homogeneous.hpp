#ifndef MYXO_HOMOGENEOUS_HPP
#define MYXO_HOMOGENEOUS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "myxo/collision.hpp"

namespace myxo {

/// Angular density with a time stamp.
struct DistributionState {
  std::vector<double> f;
  double t = 0.0;
};

/// Parameters of a spatially homogeneous run.
struct SimConfig {
  int n = 51;
  Kernel kernel = Kernel::rod;
  double mu = 0.0;
  double mass = 1.0;
  double dt = 0.0;  // <= 0 selects auto_dt
  double safety = 0.9;
  double t_end = 0.0;
  int output_cadence = 100;
  std::uint64_t seed = 0;
  std::vector<double> snapshot_times;
};

/// Stable explicit step size: safety * min(dphi^2/(2 mu), 1/(6 mass)).
/// The first bound is the parabolic condition for the three-point diffusion
/// stencil (inactive for mu = 0); the second caps the explicit-Euler
/// collision loss, whose per-particle frequency is below ~3*mass for b <= 1.
double auto_dt(const AngularGrid& grid, double mu, double mass, double safety);

/// mu * (three-point Laplacian) + Q(f, f); returns the sup norm of the
/// result (the stationarity residual).
double homogeneous_rhs(const CollisionOperator& op, double mu,
                       std::span<const double> f, std::span<double> rhs);

struct StepStats {
  double dt_used = 0.0;
  int halvings = 0;
  double pre_residual_inf = 0.0;  // ||mu f'' + Q(f)||_inf at the old state
};

/// One explicit Euler step. If the update produces a negative entry the
/// step is rejected and retried with dt/2, at most 30 times; failure after
/// that throws numerical_error.
StepStats step(DistributionState& state, const CollisionOperator& op,
               double mu, double dt);

// initial data
struct UniformRandom { double eps = 0.0; std::uint64_t seed = 0; };
struct SinglePoint { double eps = 0.0; int k0 = 0; };
struct Plateaus {
  double m1 = 0.0, m2 = 0.0;
  double i1_begin = 0.0, i1_end = 0.0;  // radians, wrapped, [begin, end)
  double i2_begin = 0.0, i2_end = 0.0;
};
struct PointMasses { std::vector<std::pair<int, double>> masses; };
using InitialSpec = std::variant<UniformRandom, SinglePoint, Plateaus, PointMasses>;

/// Nonnegative state of total mass `mass`; randomized variants are
/// reproducible from their seed. Throws on negative requested masses.
DistributionState make_initial(const AngularGrid& grid, double mass,
                               const InitialSpec& spec);

/// (a_m, b_m) with a_m = (dphi/pi) sum f_k cos(m phi_k) and likewise sin;
/// exact for trigonometric polynomials of degree < n.
std::pair<double, double> fourier_mode(const AngularGrid& grid,
                                       std::span<const double> f, int m);

/// dphi-weighted masses of the two half circles starting at k0:
/// first = sum over [k0, k0+n), second = the rest.
std::pair<double, double> half_interval_masses(const AngularGrid& grid,
                                               std::span<const double> f,
                                               int k0);

double l2_distance_to_uniform(const AngularGrid& grid, std::span<const double> f,
                              double mass);

struct TrajectoryRow {
  double t = 0.0;
  double mass = 0.0;
  double l2_dist_uniform = 0.0;
  std::array<double, 6> a{};
  std::array<double, 6> b{};
  double m_left = 0.0;
  double m_right = 0.0;
};

struct ProfileSnapshot {
  double t = 0.0;
  std::vector<double> f;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  std::vector<ProfileSnapshot> snapshots;
  DistributionState final_state;
  double dt = 0.0;
  long steps = 0;
};

/// Integrates to t_end, recording diagnostics every output_cadence steps
/// (plus the initial and final states).
Trajectory run(const SimConfig& config, const DistributionState& initial);

}  // namespace myxo

#endif
