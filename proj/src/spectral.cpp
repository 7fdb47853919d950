#include "myxo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace myxo {

double lambda_rod(int m, double mu, double f0) {
  if (m < 1) throw std::invalid_argument("lambda_rod: mode must be >= 1");
  if (m == 1) return -mu - f0 / 3.0 * (4.0 * std::sqrt(2.0) - 1.0);
  if (m == 2) return -4.0 * mu + 2.0 * f0 / 3.0;
  const double md = m;
  const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
  const double bracket = (4.0 * md * std::sin(md * M_PI / 4.0) - 8.0) / (md * md - 4.0) +
                         (md * std::sin(md * M_PI / 2.0) + sgn) / (md * md - 1.0) +
                         sgn - 2.0;
  return -md * md * mu + 2.0 * f0 * bracket;
}

double critical_mu(Kernel kernel, double mass) {
  if (mass <= 0.0) throw std::invalid_argument("critical_mu: mass must be > 0");
  const double f0 = mass / (2.0 * M_PI);
  if (kernel == Kernel::rod) return f0 / 6.0;
  return f0 * (1.0 - M_PI / 4.0);
}

double diffusion_symbol(const AngularGrid& grid, int m) {
  const double dphi = grid.delta_phi;
  return (2.0 - 2.0 * std::cos(m * dphi)) / (dphi * dphi);
}

namespace {

// applies Q_M = Q(f0, .) + Q(., f0) once
std::vector<double> qm_apply(const CollisionOperator& op, double f0,
                             std::span<const double> v) {
  const int N = op.grid().num_points;
  std::vector<double> uniform(N, f0), q1(N), q2(N), out(N);
  op.bilinear(uniform, v, q1);
  op.bilinear(v, uniform, q2);
  for (int k = 0; k < N; ++k) out[k] = q1[k] + q2[k];
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

double collision_symbol_numeric(const AngularGrid& grid, Kernel kernel,
                                double mass, int m) {
  const int N = grid.num_points;
  const double f0 = mass / (2.0 * M_PI);
  CollisionOperator op(grid, kernel);
  std::vector<double> c(N);
  for (int k = 0; k < N; ++k) c[k] = std::cos(m * grid.angle(k));
  auto qc = qm_apply(op, f0, c);
  return dot(c, qc) / dot(c, c);
}

double numeric_critical_mu(const AngularGrid& grid, Kernel kernel, double mass) {
  // lambda_2(mu) = -mu * diffusion_symbol(2) + collision part, affine in mu
  return collision_symbol_numeric(grid, kernel, mass, 2) /
         diffusion_symbol(grid, 2);
}

SpectrumReport numeric_spectrum(const AngularGrid& grid, Kernel kernel,
                                double mu, double mass,
                                std::span<const int> modes) {
  const int N = grid.num_points;
  const double f0 = mass / (2.0 * M_PI);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CollisionOperator op(grid, kernel);

  SpectrumReport report;
  report.n = grid.n;
  report.kernel = kernel;
  report.mu = mu;
  report.mass = mass;
  report.mu_star_closed = critical_mu(kernel, mass);
  report.mu_star_numeric = numeric_critical_mu(grid, kernel, mass);

  const double inv_dphi2 = 1.0 / (grid.delta_phi * grid.delta_phi);
  auto full_apply = [&](std::span<const double> v) {
    std::vector<double> out = qm_apply(op, f0, v);
    for (int k = 0; k < N; ++k) {
      double lap = (v[(k + 1) % N] - 2.0 * v[k] + v[(k + N - 1) % N]) * inv_dphi2;
      out[k] += mu * lap;
    }
    return out;
  };

  for (int m : modes) {
    if (m < 1 || m >= grid.n) {
      throw std::invalid_argument("numeric_spectrum: mode " + std::to_string(m) +
                                  " aliases on n = " + std::to_string(grid.n));
    }
    std::vector<double> c(N), s(N);
    for (int k = 0; k < N; ++k) {
      c[k] = std::cos(m * grid.angle(k));
      s[k] = std::sin(m * grid.angle(k));
    }
    auto wc = full_apply(c);
    auto ws = full_apply(s);
    const double cc = dot(c, c), ss = dot(s, s);
    const double lam_c = dot(c, wc) / cc;
    const double lam_s = dot(s, ws) / ss;

    // leakage of the image out of span{cos, sin}
    double resid2 = 0.0, norm2 = 0.0;
    const double cs_c = dot(s, wc) / ss;  // cross projections
    const double cs_s = dot(c, ws) / cc;
    for (int k = 0; k < N; ++k) {
      double rc = wc[k] - lam_c * c[k] - cs_c * s[k];
      double rs = ws[k] - lam_s * s[k] - cs_s * c[k];
      resid2 += rc * rc + rs * rs;
      norm2 += wc[k] * wc[k] + ws[k] * ws[k];
    }

    ModeResult r;
    r.mode = m;
    r.lambda_numeric = 0.5 * (lam_c + lam_s);
    r.cos_sin_gap = std::fabs(lam_c - lam_s);
    r.subspace_residual = norm2 > 0.0 ? std::sqrt(resid2 / norm2) : 0.0;
    r.diffusion_numeric = -mu * diffusion_symbol(grid, m);
    r.collision_numeric = r.lambda_numeric - r.diffusion_numeric;
    if (kernel == Kernel::rod) {
      r.lambda_closed = lambda_rod(m, mu, f0);
      r.abs_err = std::fabs(r.lambda_numeric - r.lambda_closed);
      r.rel_err = r.abs_err / std::fabs(r.lambda_closed);
    } else {
      r.lambda_closed = nan;
      r.abs_err = nan;
      r.rel_err = nan;
    }
    report.modes.push_back(r);
  }
  return report;
}

std::vector<double> dense_spectrum(const AngularGrid& grid, Kernel kernel,
                                   double mu, double mass) {
  const int N = grid.num_points;
  DenseMatrix A = linearized_matrix(grid, kernel, mass);
  const double inv_dphi2 = 1.0 / (grid.delta_phi * grid.delta_phi);
  for (int k = 0; k < N; ++k) {
    A.at(k, k) += -2.0 * mu * inv_dphi2;
    A.at(k, (k + 1) % N) += mu * inv_dphi2;
    A.at(k, (k + N - 1) % N) += mu * inv_dphi2;
  }
  // the operator is a symmetric circulant; symmetrize away rounding noise
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < i; ++j) {
      double v = 0.5 * (A.at(i, j) + A.at(j, i));
      A.at(i, j) = A.at(j, i) = v;
    }
  }

  // cyclic Jacobi
  double off = 0.0, scale = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i != j) off += A.at(i, j) * A.at(i, j);
      scale = std::max(scale, std::fabs(A.at(i, j)));
    }
  }
  const double tol = 1e-14 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < 100 && std::sqrt(off) > tol * N; ++sweep) {
    for (int p = 0; p < N - 1; ++p) {
      for (int q = p + 1; q < N; ++q) {
        double apq = A.at(p, q);
        if (std::fabs(apq) <= tol) continue;
        double theta = 0.5 * (A.at(q, q) - A.at(p, p)) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < N; ++k) {
          double akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          double apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
      }
    }
    off = 0.0;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (i != j) off += A.at(i, j) * A.at(i, j);
      }
    }
  }
  std::vector<double> eigs(N);
  for (int i = 0; i < N; ++i) eigs[i] = A.at(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

}  // namespace myxo
