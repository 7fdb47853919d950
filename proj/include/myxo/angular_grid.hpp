#ifndef MYXO_ANGULAR_GRID_HPP
#define MYXO_ANGULAR_GRID_HPP

#include <vector>

namespace myxo {

/// Equidistant grid on the angular torus [0, 2pi) with 2n points,
/// phi_k = k*pi/n. The half-resolution n must be odd, so that no pair of
/// grid directions meets at exactly pi/2 and the open alignment/reversal
/// sectors classify every colliding pair unambiguously.
struct AngularGrid {
  int n = 0;               // half-resolution, odd
  int num_points = 0;      // 2n
  double delta_phi = 0.0;  // pi/n
  std::vector<double> angles;

  double angle(int k) const { return angles[k]; }
  /// Canonical index in {0, ..., 2n-1} for any integer offset.
  int wrap(long k) const {
    long m = k % num_points;
    return static_cast<int>(m < 0 ? m + num_points : m);
  }
  int opposite(int k) const { return wrap(k + n); }
};

/// Builds the grid. Rejects even n and n < 5.
AngularGrid make_grid(int n);

/// Signed index distance d in (-n, n] with l == k + d (mod 2n).
/// The angle between the two directions is |d| * delta_phi.
int signed_distance(const AngularGrid& grid, int k, int l);

}  // namespace myxo

#endif
