#include "myxo/angular_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace myxo {

AngularGrid make_grid(int n) {
  if (n < 5) {
    throw std::invalid_argument("angular grid: n must be >= 5, got " +
                                std::to_string(n));
  }
  if (n % 2 == 0) {
    // even n puts grid pairs at exactly pi/2, which neither the open
    // alignment sector nor the open reversal sector owns
    throw std::invalid_argument("angular grid: n must be odd, got " +
                                std::to_string(n));
  }
  AngularGrid grid;
  grid.n = n;
  grid.num_points = 2 * n;
  grid.delta_phi = M_PI / n;
  grid.angles.resize(grid.num_points);
  for (int k = 0; k < grid.num_points; ++k) {
    grid.angles[k] = k * grid.delta_phi;
  }
  return grid;
}

int signed_distance(const AngularGrid& grid, int k, int l) {
  int d = grid.wrap(static_cast<long>(l) - k);
  return d > grid.n ? d - grid.num_points : d;
}

}  // namespace myxo
