#ifndef MYXO_COLLISION_HPP
#define MYXO_COLLISION_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "myxo/angular_grid.hpp"

namespace myxo {

/// Signaled when an integration or iteration cannot proceed (unstable
/// configuration, divergent fixed-point run, ...).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Collision cross-section. Rod-shaped bodies collide at rate
/// |sin(phi - phi*)|; "maxwell" is the angle-independent rate 1.
enum class Kernel { rod, maxwell };

/// b(|d| * delta_phi) for an index distance d, in [0, 1].
double kernel_eval(Kernel kernel, int d, const AngularGrid& grid);

/// Discrete alignment/reversal collision operator on the angular grid.
///
/// For output index k, with J = max{ j : j < n/4 } and the reversal set
/// R = { l : |signed_distance(k,l)| >= (n+1)/2 },
///
///   Q(g,h)_k = 2 dphi sum_{0<|j|<=J} b(2j dphi) g_{k-j} h_{k+j}
///            +   dphi sum_{l in R}  b(|d| dphi) g_{k+n} h_{l+n}
///            - 2 dphi sum_{i=1..J}  b(2i dphi) g_k (h_{k+2i} + h_{k-2i})
///            -   dphi sum_{l in R}  b(|d| dphi) g_k h_l .
///
/// Alignment pairs are restricted to even index separations 2j, with the
/// loss carrying the doubled weight 2*dphi (composite rule of spacing
/// 2*dphi over the alignment sector); gain and loss totals then cancel as
/// an algebraic identity and the discrete mass dphi*sum_k Q_k vanishes to
/// rounding. Post-collisional midpoints land on the grid. Same-direction
/// pairs (j = 0) are excluded.
///
/// Per-k sums accumulate gain/loss as per-partner differences and +-offset
/// terms pairwise in a fixed order, so the operator commutes bitwise with
/// index shifts and with reflection, and results do not depend on the
/// number of threads.
class CollisionOperator {
 public:
  CollisionOperator(const AngularGrid& grid, Kernel kernel);

  /// Reusable padding buffers; lets hot per-cell loops avoid allocation.
  struct Scratch {
    std::vector<double> g_pad, h_pad;
  };

  /// Bilinear form Q(g, h); output is signed.
  void bilinear(std::span<const double> g, std::span<const double> h,
                std::span<double> out) const;
  void bilinear(std::span<const double> g, std::span<const double> h,
                std::span<double> out, Scratch& scratch) const;
  std::vector<double> bilinear(std::span<const double> g,
                               std::span<const double> h) const;

  /// Q(f, f).
  void apply(std::span<const double> f, std::span<double> out) const;
  void apply(std::span<const double> f, std::span<double> out,
             Scratch& scratch) const;
  std::vector<double> apply(std::span<const double> f) const;

  const AngularGrid& grid() const { return grid_; }
  Kernel kernel() const { return kernel_; }
  int alignment_cutoff() const { return J_; }

 private:
  AngularGrid grid_;
  Kernel kernel_;
  int J_;
  std::vector<double> b_align_;  // b(2j dphi), j = 0..J
  std::vector<double> b_rev_;    // b(a dphi),  a = 0..n ((n+1)/2..n used)
};

/// One-shot conveniences (build the operator internally).
std::vector<double> collide(const AngularGrid& grid, Kernel kernel,
                            std::span<const double> f);
std::vector<double> collide_bilinear(const AngularGrid& grid, Kernel kernel,
                                     std::span<const double> g,
                                     std::span<const double> h);

/// Plain serial evaluation of the same quadrature, kept as the reference
/// implementation for tests and benchmarks. No tables, no OpenMP.
std::vector<double> collide_bilinear_serial(const AngularGrid& grid,
                                            Kernel kernel,
                                            std::span<const double> g,
                                            std::span<const double> h);

/// Row-major dense square matrix.
struct DenseMatrix {
  int dim = 0;
  std::vector<double> a;
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }
};

/// Linearization Q_M f = Q(f0, f) + Q(f, f0) around the uniform state
/// f0 = mass/(2 pi), assembled column-by-column from basis vectors.
DenseMatrix linearized_matrix(const AngularGrid& grid, Kernel kernel,
                              double mass);

double mass_of(const AngularGrid& grid, std::span<const double> f);

}  // namespace myxo

#endif
