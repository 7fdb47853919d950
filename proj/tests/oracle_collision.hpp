#ifndef MYXO_TESTS_ORACLE_COLLISION_HPP
#define MYXO_TESTS_ORACLE_COLLISION_HPP

#include <span>
#include <vector>

#include "myxo/angular_grid.hpp"
#include "myxo/collision.hpp"

namespace myxo::test_oracle {

// Independent brute-force evaluation of the collision quadrature: loops
// over every ordered pre-collisional pair, classifies it by the angle
// between the directions (alignment below pi/2, on even index separations
// with the doubled composite weight; reversal above pi/2) and scatters the
// gain/loss contributions into the output. The library kernel gathers per
// output index instead; only kernel_eval is shared.
std::vector<double> collide_bruteforce(const AngularGrid& grid, Kernel kernel,
                                       std::span<const double> g,
                                       std::span<const double> h);

}  // namespace myxo::test_oracle

#endif
