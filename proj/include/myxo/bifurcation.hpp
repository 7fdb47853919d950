#ifndef MYXO_BIFURCATION_HPP
#define MYXO_BIFURCATION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "myxo/homogeneous.hpp"

namespace myxo {

struct EquilibrateResult {
  DistributionState state;
  bool converged = false;
  double t_reached = 0.0;
  double residual_inf = 0.0;  // ||mu f'' + Q(f)||_inf of the returned state
  std::vector<std::pair<double, double>> residual_history;  // (t, residual)
};

/// Runs the homogeneous solver until ||mu f'' + Q(f)||_inf <= tol_eq * mass
/// or t_max is reached. Non-convergence is flagged, not fatal.
EquilibrateResult equilibrate(const SimConfig& config,
                              const DistributionState& initial, double tol_eq,
                              double t_max);

/// Leading-order amplitude of the bifurcating branch (rod kernel):
/// sqrt(220 mass (mu* - mu) / (15 pi)) below mu* = mass/(12 pi), else 0.
double predicted_amplitude(double mu, double mass);

struct SweepRow {
  double mu = 0.0;
  bool converged = false;
  double t_equilibrate = 0.0;
  double amplitude = 0.0;   // A2 = sqrt(a2^2 + b2^2)
  double predicted = 0.0;   // predicted_amplitude(mu, mass)
  int peak_index = 0;
  int opposite_peak_index = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by mu
  double mu_star_reference = 0.0;
  double fitted_slope = 0.0;  // log A2 vs log(mu*_ref - mu), subcritical rows
  int subcritical_rows = 0;
};

struct SweepOptions {
  double tol_eq = 1e-9;
  double t_max = 3e4;
  /// Reference threshold for the slope fit; <= 0 selects the numeric root
  /// of lambda_2 on the sweep grid, the threshold of the discrete system.
  double mu_star_reference = 0.0;
};

/// Equilibrates each mu from the deterministic seed state
/// f0 * (1 + 1e-3 sin(2 phi)) and records the mode-2 amplitude. The sin(2phi)
/// perturbation pins the rotation degeneracy so amplitudes are comparable
/// across rows. Rows run concurrently; results are ordered by mu.
SweepTable amplitude_sweep(std::span<const double> mu_list,
                           const SimConfig& tpl, std::uint64_t seed,
                           const SweepOptions& opts = {});

/// Indices of the global maximum and of the maximum over the opposite half
/// circle (circular distance > n/2 from the first peak).
std::pair<int, int> find_opposite_peaks(const AngularGrid& grid,
                                        std::span<const double> f);

}  // namespace myxo

#endif
