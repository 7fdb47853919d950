#ifndef MYXO_FIXEDPOINT_HPP
#define MYXO_FIXEDPOINT_HPP

#include <span>
#include <vector>

#include "myxo/bifurcation.hpp"

namespace myxo {

/// Symmetric truncation [-R, R] of the real line with an odd number of
/// nodes, xi_i = dxi * (i - (N-1)/2), so xi = 0 is a node and the grid is
/// exactly symmetric under i -> N-1-i.
struct LineGrid {
  double radius = 0.0;
  int num_nodes = 0;
  double dxi = 0.0;
  std::vector<double> nodes;
};

LineGrid make_line_grid(double radius, int num_nodes);

/// exp(-xi^2/8)/sqrt(8 pi), renormalized to trapezoid mass 1: an even
/// profile of variance 4, i.e. an element of the invariant set of s_map.
std::vector<double> gaussian_seed(const LineGrid& grid);

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};
Moments moments(const LineGrid& grid, std::span<const double> F);

struct SMapResult {
  std::vector<double> F;
  double renorm_factor = 0.0;  // applied factor; 1/(raw trapezoid mass)
};

/// One application of the fixed-point map
///   S(F)(xi) = int int exp(-|xi - y|) F(2y - z) F(z) dz dy :
/// the inner integral is the autoconvolution (F*F)(2y) by trapezoid
/// quadrature; the outer Green's-kernel integral uses trapezoid plus the
/// Euler-Maclaurin kink correction -(dxi^2/6) g(xi) (the kernel derivative
/// jumps by -2g at y = xi, which plain trapezoid feels at O(dxi^2) --
/// larger than the exp(-R) tail the renormalization budget allows for).
/// The result is renormalized to mass 1.
///
/// Defined on even profiles (rejects others): outputs are computed on the
/// left half and mirrored, so evenness is preserved exactly.
SMapResult s_map(const LineGrid& grid, std::span<const double> F);

/// Reference implementation: same quadrature, all nodes computed directly,
/// no tables, no OpenMP. Kept for tests and benchmarks.
SMapResult s_map_serial(const LineGrid& grid, std::span<const double> F);

struct PicardRow {
  int iter = 0;
  double sup_residual = 0.0;
  double mass_renorm_factor = 0.0;
  double variance = 0.0;
};

struct PicardResult {
  std::vector<double> profile;
  bool converged = false;
  int iterations = 0;
  double sup_residual = 0.0;
  std::vector<PicardRow> history;
};

/// Damped iteration F <- (1-omega) F + omega S(F) until
/// ||F - S(F)||_inf <= tol. The variance is monitored, never enforced;
/// drift beyond 1e-2 from 4 signals discretization error and throws.
PicardResult picard_solve(const LineGrid& grid, std::vector<double> seed,
                          double omega = 0.5, double tol = 1e-8,
                          int max_iter = 500);

/// Two-peak angular density (mass/2) sqrt(mass/2mu) F(phi sqrt(mass/2mu))
/// around phi = 0 and its pi-shifted copy, F interpolated linearly in xi,
/// renormalized to total mass. Rejects scales with sqrt(mass/2mu)*dphi > 2
/// (profile would alias on the grid). The output is exactly pi-shift
/// symmetric by construction.
std::vector<double> rescale_to_angle(const LineGrid& grid,
                                     std::span<const double> F, double mu,
                                     double mass, const AngularGrid& agrid);

struct SmallMuOptions {
  double line_radius = 16.0;
  int line_nodes = 1601;
  double omega = 0.5;
  double picard_tol = 1e-8;
  int max_iter = 500;
  double tol_eq = 1e-9;
  double t_max = 2e4;
};

struct SmallMuComparison {
  double rel_l1_error = 0.0;
  std::vector<double> f_equilibrium;  // peak-aligned to phi = 0
  std::vector<double> f_rescaled;
  double m_left = 0.0, m_right = 0.0;  // half masses split between the peaks
  bool equilibrated = false;
  double t_equilibrate = 0.0;
  PicardResult picard;
};

/// Equilibrates the maxwell-kernel homogeneous model from a symmetric
/// two-plateau state at this mu, aligns the peak to phi = 0, and compares
/// against the rescaled fixed-point profile in relative L1.
SmallMuComparison compare_small_mu(double mu, double mass,
                                   const AngularGrid& agrid,
                                   const SmallMuOptions& opts = {});

}  // namespace myxo

#endif
