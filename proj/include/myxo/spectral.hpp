#ifndef MYXO_SPECTRAL_HPP
#define MYXO_SPECTRAL_HPP

#include <span>
#include <vector>

#include "myxo/collision.hpp"

namespace myxo {

/// Closed-form eigenvalue of mu*d^2/dphi^2 + Q_M on the mode-m subspace for
/// the rod kernel:
///   lambda_1 = -mu - (f0/3)(4 sqrt 2 - 1)
///   lambda_2 = -4 mu + 2 f0 / 3
///   lambda_m = -m^2 mu + 2 f0 [ (4m sin(m pi/4) - 8)/(m^2-4)
///            + (m sin(m pi/2) + (-1)^m)/(m^2-1) + (-1)^m - 2 ],  m > 2.
double lambda_rod(int m, double mu, double f0);

/// Diffusivity where the mode-2 eigenvalue changes sign:
/// rod -> mass/(12 pi); maxwell -> (mass/2pi)(1 - pi/4).
double critical_mu(Kernel kernel, double mass);

/// Symbol of the discrete three-point Laplacian, (2 - 2 cos(m dphi))/dphi^2.
double diffusion_symbol(const AngularGrid& grid, int m);

/// Rayleigh quotient of the discrete Q_M on the mode-m cosine vector
/// (mu-independent collision part of the numeric eigenvalue).
double collision_symbol_numeric(const AngularGrid& grid, Kernel kernel,
                                double mass, int m);

/// Root of the numeric lambda_2(mu) = 0 (lambda_2 is affine in mu).
double numeric_critical_mu(const AngularGrid& grid, Kernel kernel, double mass);

struct ModeResult {
  int mode = 0;
  double lambda_closed = 0.0;   // NaN for kernels without a closed form
  double lambda_numeric = 0.0;  // mean of the cos/sin Rayleigh quotients
  double abs_err = 0.0;
  double rel_err = 0.0;
  double cos_sin_gap = 0.0;          // |cos quotient - sin quotient|
  double subspace_residual = 0.0;    // relative leakage out of span{cos, sin}
  double collision_numeric = 0.0;    // numeric eigenvalue split: collision part
  double diffusion_numeric = 0.0;    // and -mu * discrete symbol
};

struct SpectrumReport {
  int n = 0;
  Kernel kernel = Kernel::rod;
  double mu = 0.0;
  double mass = 0.0;
  std::vector<ModeResult> modes;
  double mu_star_closed = 0.0;
  double mu_star_numeric = 0.0;
};

/// Applies mu*Laplacian + Q_M to the discrete cos(m phi) and sin(m phi)
/// vectors; the operator is shift-equivariant, so these mode subspaces are
/// invariant and the Rayleigh quotients are the eigenvalues. Modes must
/// satisfy 1 <= m < n (no aliasing).
SpectrumReport numeric_spectrum(const AngularGrid& grid, Kernel kernel,
                                double mu, double mass,
                                std::span<const int> modes);

/// Dense cross-check path for small n: all eigenvalues of the (symmetric)
/// discrete operator by cyclic Jacobi, ascending.
std::vector<double> dense_spectrum(const AngularGrid& grid, Kernel kernel,
                                   double mu, double mass);

}  // namespace myxo

#endif
