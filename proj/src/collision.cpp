#include "myxo/collision.hpp"

#include <cmath>
#include <cstddef>
#include <omp.h>

namespace myxo {

double kernel_eval(Kernel kernel, int d, const AngularGrid& grid) {
  if (kernel == Kernel::maxwell) return 1.0;
  return std::fabs(std::sin(std::abs(d) * grid.delta_phi));
}

CollisionOperator::CollisionOperator(const AngularGrid& grid, Kernel kernel)
    : grid_(grid), kernel_(kernel), J_(grid.n / 4) {
  // J = max{ j : j < n/4 }; n odd, so n/4 is never an integer
  b_align_.assign(J_ + 1, 0.0);
  for (int j = 1; j <= J_; ++j) b_align_[j] = kernel_eval(kernel, 2 * j, grid_);
  b_rev_.assign(grid_.n + 1, 0.0);
  for (int a = (grid_.n + 1) / 2; a <= grid_.n; ++a) {
    b_rev_[a] = kernel_eval(kernel, a, grid_);
  }
}

namespace {

// One output index. Gain and loss are accumulated as per-partner
// differences and +-offset terms as commutative pairs: the operator then
// commutes bitwise with index shifts and reflection, and states where gain
// and loss cancel partner-by-partner (the uniform state, opposite point
// masses) map to exact zeros.
inline double output_at(int k, int n, int J, double dphi, const double* bA,
                        const double* bR, const double* gb, const double* hb) {
  const double gk = gb[k];
  const double gkn = gb[k + n];
  double align = 0.0;  // pre-pair (k-j, k+j) -> midpoint k, minus the
                       // doubled-weight loss against partners at 2j
  const int N = 2 * n;
  for (int j = 1; j <= J; ++j) {
    align += bA[j] * ((gb[k - j + N] * hb[k + j] - gk * hb[k + 2 * j]) +
                      (gb[k + j] * hb[k - j] - gk * hb[k - 2 * j]));
  }
  double rev = 0.0;  // both partners at angle > pi/2, shifted by pi
  for (int a = (n + 1) / 2; a < n; ++a) {
    rev += bR[a] * ((gkn * hb[k + n + a] - gk * hb[k + a]) +
                    (gkn * hb[k + n - a] - gk * hb[k - a]));
  }
  rev += bR[n] * (gkn * hb[k] - gk * hb[k + n]);  // antipodal partner
  return dphi * (2.0 * align + rev);
}

}  // namespace

void CollisionOperator::bilinear(std::span<const double> g,
                                 std::span<const double> h,
                                 std::span<double> out,
                                 Scratch& scratch) const {
  const int N = grid_.num_points;
  const int n = grid_.n;
  if (static_cast<int>(g.size()) != N || static_cast<int>(h.size()) != N ||
      static_cast<int>(out.size()) != N) {
    throw std::invalid_argument("collision: density size does not match grid");
  }
  const double dphi = grid_.delta_phi;

  // Periodic padding [h|h|h]: inner loops index hb[k + off] for
  // off in [-N, 2N), no wrapping on the hot path.
  scratch.h_pad.resize(3 * static_cast<std::size_t>(N));
  scratch.g_pad.resize(2 * static_cast<std::size_t>(N));
  double* hp = scratch.h_pad.data();
  double* gp = scratch.g_pad.data();
  for (int k = 0; k < N; ++k) hp[k] = hp[k + N] = hp[k + 2 * N] = h[k];
  for (int k = 0; k < N; ++k) gp[k] = gp[k + N] = g[k];

  const double* hb = hp + N;
  const double* bA = b_align_.data();
  const double* bR = b_rev_.data();
  const int J = J_;
  double* o = out.data();

  // per-k results are independent of the thread count; skip the parallel
  // region for small grids and when already inside one (per-cell loops)
  if (N >= 128 && !omp_in_parallel()) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k) {
      o[k] = output_at(k, n, J, dphi, bA, bR, gp, hb);
    }
  } else {
    for (int k = 0; k < N; ++k) {
      o[k] = output_at(k, n, J, dphi, bA, bR, gp, hb);
    }
  }
}

void CollisionOperator::bilinear(std::span<const double> g,
                                 std::span<const double> h,
                                 std::span<double> out) const {
  Scratch scratch;
  bilinear(g, h, out, scratch);
}

std::vector<double> CollisionOperator::bilinear(std::span<const double> g,
                                                std::span<const double> h) const {
  std::vector<double> out(grid_.num_points);
  bilinear(g, h, out);
  return out;
}

void CollisionOperator::apply(std::span<const double> f,
                              std::span<double> out) const {
  bilinear(f, f, out);
}

void CollisionOperator::apply(std::span<const double> f, std::span<double> out,
                              Scratch& scratch) const {
  bilinear(f, f, out, scratch);
}

std::vector<double> CollisionOperator::apply(std::span<const double> f) const {
  return bilinear(f, f);
}

std::vector<double> collide(const AngularGrid& grid, Kernel kernel,
                            std::span<const double> f) {
  return CollisionOperator(grid, kernel).apply(f);
}

std::vector<double> collide_bilinear(const AngularGrid& grid, Kernel kernel,
                                     std::span<const double> g,
                                     std::span<const double> h) {
  return CollisionOperator(grid, kernel).bilinear(g, h);
}

std::vector<double> collide_bilinear_serial(const AngularGrid& grid,
                                            Kernel kernel,
                                            std::span<const double> g,
                                            std::span<const double> h) {
  const int N = grid.num_points;
  const int n = grid.n;
  const int J = n / 4;
  const double dphi = grid.delta_phi;
  auto at = [N](int i) {
    int m = i % N;
    return m < 0 ? m + N : m;
  };
  std::vector<double> out(N);
  for (int k = 0; k < N; ++k) {
    double align_gain = 0.0, align_loss = 0.0;
    for (int j = 1; j <= J; ++j) {
      double b = kernel_eval(kernel, 2 * j, grid);
      align_gain += b * (g[at(k - j)] * h[at(k + j)] + g[at(k + j)] * h[at(k - j)]);
      align_loss += b * (h[at(k + 2 * j)] + h[at(k - 2 * j)]);
    }
    double rev_gain = 0.0, rev_loss = 0.0;
    for (int a = (n + 1) / 2; a < n; ++a) {
      double b = kernel_eval(kernel, a, grid);
      rev_gain += b * (h[at(k + n + a)] + h[at(k + n - a)]);
      rev_loss += b * (h[at(k + a)] + h[at(k - a)]);
    }
    rev_gain += kernel_eval(kernel, n, grid) * h[k];
    rev_loss += kernel_eval(kernel, n, grid) * h[at(k + n)];
    out[k] = 2.0 * dphi * align_gain - 2.0 * dphi * g[k] * align_loss +
             dphi * g[at(k + n)] * rev_gain - dphi * g[k] * rev_loss;
  }
  return out;
}

DenseMatrix linearized_matrix(const AngularGrid& grid, Kernel kernel,
                              double mass) {
  const int N = grid.num_points;
  const double f0 = mass / (2.0 * M_PI);
  CollisionOperator op(grid, kernel);
  std::vector<double> uniform(N, f0);
  std::vector<double> basis(N, 0.0), q1(N), q2(N);
  DenseMatrix A;
  A.dim = N;
  A.a.assign(static_cast<std::size_t>(N) * N, 0.0);
  for (int l = 0; l < N; ++l) {
    basis[l] = 1.0;
    op.bilinear(uniform, basis, q1);
    op.bilinear(basis, uniform, q2);
    for (int k = 0; k < N; ++k) A.at(k, l) = q1[k] + q2[k];
    basis[l] = 0.0;
  }
  return A;
}

double mass_of(const AngularGrid& grid, std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * grid.delta_phi;
}

}  // namespace myxo
