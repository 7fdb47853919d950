#include "myxo/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace myxo {

LineGrid make_line_grid(double radius, int num_nodes) {
  if (radius <= 0.0) throw std::invalid_argument("line grid: radius must be > 0");
  if (num_nodes < 3 || num_nodes % 2 == 0) {
    throw std::invalid_argument("line grid: need an odd number of nodes >= 3");
  }
  LineGrid grid;
  grid.radius = radius;
  grid.num_nodes = num_nodes;
  grid.dxi = 2.0 * radius / (num_nodes - 1);
  grid.nodes.resize(num_nodes);
  const int mid = (num_nodes - 1) / 2;
  // nodes built from the center so xi_{N-1-i} = -xi_i holds bitwise
  for (int i = 0; i < num_nodes; ++i) grid.nodes[i] = grid.dxi * (i - mid);
  return grid;
}

namespace {

double trapz(const LineGrid& grid, std::span<const double> v) {
  double s = 0.5 * (v.front() + v.back());
  for (int i = 1; i < grid.num_nodes - 1; ++i) s += v[i];
  return s * grid.dxi;
}

void require_size(const LineGrid& grid, std::span<const double> F) {
  if (static_cast<int>(F.size()) != grid.num_nodes) {
    throw std::invalid_argument("profile size does not match line grid");
  }
}

void require_even(const LineGrid& grid, std::span<const double> F) {
  double sup = 0.0, asym = 0.0;
  for (int i = 0; i < grid.num_nodes; ++i) {
    sup = std::max(sup, std::fabs(F[i]));
    asym = std::max(asym, std::fabs(F[i] - F[grid.num_nodes - 1 - i]));
  }
  if (asym > 1e-9 * std::max(sup, 1e-300)) {
    throw std::invalid_argument("s_map: profile is not even");
  }
}

}  // namespace

std::vector<double> gaussian_seed(const LineGrid& grid) {
  std::vector<double> F(grid.num_nodes);
  for (int i = 0; i < grid.num_nodes; ++i) {
    double xi = grid.nodes[i];
    F[i] = std::exp(-xi * xi / 8.0) / std::sqrt(8.0 * M_PI);
  }
  double m = trapz(grid, F);
  for (double& v : F) v /= m;
  return F;
}

Moments moments(const LineGrid& grid, std::span<const double> F) {
  require_size(grid, F);
  Moments mom;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < grid.num_nodes; ++i) {
    double w = (i == 0 || i == grid.num_nodes - 1) ? 0.5 : 1.0;
    double xi = grid.nodes[i];
    m0 += w * F[i];
    m1 += w * xi * F[i];
    m2 += w * xi * xi * F[i];
  }
  mom.mass = m0 * grid.dxi;
  mom.mean = m1 * grid.dxi / mom.mass;
  mom.variance = m2 * grid.dxi / mom.mass - mom.mean * mom.mean;
  return mom;
}

SMapResult s_map(const LineGrid& grid, std::span<const double> F) {
  require_size(grid, F);
  require_even(grid, F);
  const int N = grid.num_nodes;
  const int mid = (N - 1) / 2;
  const double h = grid.dxi;

  // inner integral: autoconvolution at 2 xi_m, trapezoid in the z variable;
  // 2 xi_m - xi_j is the node 2m - j, zero outside the truncation
  std::vector<double> conv(N);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < N; ++m) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      int idx = 2 * m - j;
      if (idx < 0 || idx >= N) continue;
      double w = (j == 0 || j == N - 1) ? 0.5 : 1.0;
      s += w * F[idx] * F[j];
    }
    conv[m] = s * h;
  }

  std::vector<double> ek(N);
  for (int d = 0; d < N; ++d) ek[d] = std::exp(-d * h);

  // outer integral: trapezoid plus the kink correction -(h^2/6) g(xi_i)
  // (the integrand derivative jumps by -2 g at y = xi_i); computed on the
  // left half and mirrored, so even in, even out, bitwise
  SMapResult result;
  result.F.assign(N, 0.0);
  double* out = result.F.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i <= mid; ++i) {
    double s = 0.0;
    for (int m = 0; m < N; ++m) {
      double w = (m == 0 || m == N - 1) ? 0.5 : 1.0;
      s += w * ek[std::abs(i - m)] * conv[m];
    }
    out[i] = s * h - h * h / 6.0 * conv[i];
    out[N - 1 - i] = out[i];
  }

  double mass = trapz(grid, result.F);
  result.renorm_factor = 1.0 / mass;
  for (double& v : result.F) v *= result.renorm_factor;
  return result;
}

SMapResult s_map_serial(const LineGrid& grid, std::span<const double> F) {
  require_size(grid, F);
  const int N = grid.num_nodes;
  const double h = grid.dxi;
  std::vector<double> conv(N);
  for (int m = 0; m < N; ++m) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      int idx = 2 * m - j;
      if (idx < 0 || idx >= N) continue;
      double w = (j == 0 || j == N - 1) ? 0.5 : 1.0;
      s += w * F[idx] * F[j];
    }
    conv[m] = s * h;
  }
  SMapResult result;
  result.F.assign(N, 0.0);
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int m = 0; m < N; ++m) {
      double w = (m == 0 || m == N - 1) ? 0.5 : 1.0;
      s += w * std::exp(-std::fabs(grid.nodes[i] - grid.nodes[m])) * conv[m];
    }
    result.F[i] = s * h - h * h / 6.0 * conv[i];
  }
  double mass = trapz(grid, result.F);
  result.renorm_factor = 1.0 / mass;
  for (double& v : result.F) v *= result.renorm_factor;
  return result;
}

PicardResult picard_solve(const LineGrid& grid, std::vector<double> seed,
                          double omega, double tol, int max_iter) {
  if (omega <= 0.0 || omega > 1.0) {
    throw std::invalid_argument("picard_solve: damping must be in (0, 1]");
  }
  require_size(grid, seed);
  PicardResult result;
  result.profile = std::move(seed);

  for (int it = 0; it < max_iter; ++it) {
    SMapResult sf = s_map(grid, result.profile);
    double resid = 0.0;
    for (int i = 0; i < grid.num_nodes; ++i) {
      resid = std::max(resid, std::fabs(sf.F[i] - result.profile[i]));
    }
    for (int i = 0; i < grid.num_nodes; ++i) {
      result.profile[i] = (1.0 - omega) * result.profile[i] + omega * sf.F[i];
    }
    Moments mom = moments(grid, result.profile);
    result.history.push_back({it, resid, sf.renorm_factor, mom.variance});
    result.iterations = it + 1;
    result.sup_residual = resid;
    if (std::fabs(mom.variance - 4.0) > 1e-2) {
      throw numerical_error(
          "picard_solve: variance drifted to " + std::to_string(mom.variance) +
          " (discretization too coarse or truncation too small)");
    }
    if (resid <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::vector<double> rescale_to_angle(const LineGrid& grid,
                                     std::span<const double> F, double mu,
                                     double mass, const AngularGrid& agrid) {
  require_size(grid, F);
  if (mu <= 0.0) throw std::invalid_argument("rescale_to_angle: mu must be > 0");
  const double scale = std::sqrt(mass / (2.0 * mu));
  if (scale * agrid.delta_phi > 2.0) {
    throw std::invalid_argument(
        "rescale_to_angle: profile aliases on the angular grid "
        "(sqrt(mass/2mu) * dphi > 2)");
  }
  std::vector<double> f(agrid.num_points, 0.0);
  const double height = 0.5 * mass * scale;
  // peak at phi = 0 on [0, n), mirrored copy gives exact pi-shift symmetry
  for (int k = 0; k < agrid.n; ++k) {
    // signed distance of phi_k to the nearest peak (0 or pi)
    double d = std::remainder(agrid.angle(k), M_PI);
    double pos = d * scale / grid.dxi + (grid.num_nodes - 1) / 2;
    if (pos >= 0.0 && pos <= grid.num_nodes - 1) {
      int i0 = std::min(static_cast<int>(pos), grid.num_nodes - 2);
      double frac = pos - i0;
      f[k] = height * ((1.0 - frac) * F[i0] + frac * F[i0 + 1]);
    }
  }
  for (int k = 0; k < agrid.n; ++k) f[k + agrid.n] = f[k];
  double m = mass_of(agrid, f);
  if (m <= 0.0) throw numerical_error("rescale_to_angle: zero mass profile");
  for (double& v : f) v *= mass / m;
  return f;
}

SmallMuComparison compare_small_mu(double mu, double mass,
                                   const AngularGrid& agrid,
                                   const SmallMuOptions& opts) {
  LineGrid lgrid = make_line_grid(opts.line_radius, opts.line_nodes);
  SmallMuComparison cmp;
  cmp.picard = picard_solve(lgrid, gaussian_seed(lgrid), opts.omega,
                            opts.picard_tol, opts.max_iter);
  if (!cmp.picard.converged) {
    throw numerical_error("compare_small_mu: fixed-point iteration did not "
                          "converge");
  }

  // symmetric two-plateau start: mass/2 on [-pi/4, pi/4] and on the
  // pi-shifted copy; symmetry keeps the peaks pinned at 0 and pi
  SimConfig cfg;
  cfg.n = agrid.n;
  cfg.kernel = Kernel::maxwell;
  cfg.mu = mu;
  cfg.mass = mass;
  cfg.output_cadence = 1000;
  Plateaus plateaus{0.5 * mass, 0.5 * mass, -M_PI / 4, M_PI / 4,
                    3 * M_PI / 4, 5 * M_PI / 4};
  DistributionState init = make_initial(agrid, mass, plateaus);
  EquilibrateResult eq = equilibrate(cfg, init, opts.tol_eq, opts.t_max);
  cmp.equilibrated = eq.converged;
  cmp.t_equilibrate = eq.t_reached;

  // align the peak to phi = 0 by rotation
  int kmax = 0;
  for (int k = 1; k < agrid.num_points; ++k) {
    if (eq.state.f[k] > eq.state.f[kmax]) kmax = k;
  }
  cmp.f_equilibrium.resize(agrid.num_points);
  for (int k = 0; k < agrid.num_points; ++k) {
    cmp.f_equilibrium[k] = eq.state.f[agrid.wrap(k + kmax)];
  }

  cmp.f_rescaled = rescale_to_angle(lgrid, cmp.picard.profile, mu, mass, agrid);

  double l1 = 0.0;
  for (int k = 0; k < agrid.num_points; ++k) {
    l1 += std::fabs(cmp.f_equilibrium[k] - cmp.f_rescaled[k]);
  }
  cmp.rel_l1_error = l1 * agrid.delta_phi / mass;

  // half circles split between the two peaks
  auto [first, second] =
      half_interval_masses(agrid, cmp.f_equilibrium, (agrid.n + 1) / 2);
  cmp.m_right = first;
  cmp.m_left = second;
  return cmp;
}

}  // namespace myxo
