#include <doctest.h>

#include <cmath>
#include <vector>

#include "myxo/collision.hpp"
#include "myxo/rng.hpp"
#include "oracle_collision.hpp"

using namespace myxo;

namespace {

std::vector<double> random_state(const AngularGrid& grid, Rng& rng) {
  std::vector<double> f(grid.num_points);
  for (double& v : f) v = rng.uniform();
  return f;
}

std::vector<double> rotate(const AngularGrid& grid, std::span<const double> f,
                           int shift) {
  std::vector<double> out(grid.num_points);
  for (int k = 0; k < grid.num_points; ++k) out[k] = f[grid.wrap(k - shift)];
  return out;
}

std::vector<double> reflect(const AngularGrid& grid, std::span<const double> f) {
  std::vector<double> out(grid.num_points);
  for (int k = 0; k < grid.num_points; ++k) out[k] = f[grid.wrap(-k)];
  return out;
}

}  // namespace

TEST_CASE("kernel_eval values") {
  AngularGrid g = make_grid(51);
  CHECK(kernel_eval(Kernel::rod, 0, g) == 0.0);
  CHECK(kernel_eval(Kernel::rod, 51, g) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kernel_eval(Kernel::maxwell, 17, g) == 1.0);
  AngularGrid g4 = make_grid(25);  // d with |d|*dphi = pi/2 does not exist on
  // odd grids; check the value near pi/2 approaches 1
  CHECK(kernel_eval(Kernel::rod, 12, g4) < 1.0);
  CHECK(kernel_eval(Kernel::rod, 12, g4) > 0.99);
  for (int d = -g.n; d <= g.n; ++d) {
    double b = kernel_eval(Kernel::rod, d, g);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    CHECK(b == kernel_eval(Kernel::rod, -d, g));
  }
}

TEST_CASE("uniform state is an equilibrium") {
  for (Kernel kernel : {Kernel::rod, Kernel::maxwell}) {
    AngularGrid g = make_grid(51);
    double f0 = 1.0 / (2.0 * M_PI);
    std::vector<double> f(g.num_points, f0);
    auto q = collide(g, kernel, f);
    for (double v : q) CHECK(std::fabs(v) <= 1e-13);
  }
}

TEST_CASE("opposite point masses are stationary exactly") {
  for (Kernel kernel : {Kernel::rod, Kernel::maxwell}) {
    AngularGrid g = make_grid(25);
    std::vector<double> f(g.num_points, 0.0);
    f[4] = 3.7;             // rho+
    f[g.opposite(4)] = 1.2;  // rho-
    auto q = collide(g, kernel, f);
    for (double v : q) CHECK(v == 0.0);
  }
}

TEST_CASE("conservation on random states") {
  Rng rng(11);
  for (int n : {5, 25, 51}) {
    AngularGrid g = make_grid(n);
    for (Kernel kernel : {Kernel::rod, Kernel::maxwell}) {
      CollisionOperator op(g, kernel);
      for (int rep = 0; rep < 50; ++rep) {
        auto f = random_state(g, rng);
        double m = mass_of(g, f);
        auto q = op.apply(f);
        CHECK(std::fabs(mass_of(g, q)) <= 1e-13 * m * m);
      }
    }
  }
}

TEST_CASE("conservation holds for the bilinear form with distinct inputs") {
  Rng rng(19);
  for (int n : {5, 25, 51}) {
    AngularGrid g = make_grid(n);
    for (Kernel kernel : {Kernel::rod, Kernel::maxwell}) {
      CollisionOperator op(g, kernel);
      for (int rep = 0; rep < 20; ++rep) {
        auto ga = random_state(g, rng);
        auto hb = random_state(g, rng);
        auto q = op.bilinear(ga, hb);
        double scale = mass_of(g, ga) * mass_of(g, hb);
        CHECK(std::fabs(mass_of(g, q)) <= 1e-13 * scale);
      }
    }
  }
}

TEST_CASE("shift and reflection equivariance are exact") {
  AngularGrid g = make_grid(25);
  Rng rng(5);
  auto f = random_state(g, rng);
  CollisionOperator op(g, Kernel::rod);
  auto qf = op.apply(f);

  for (int shift : {1, 7, 24, 49}) {
    auto qr = op.apply(rotate(g, f, shift));
    auto rq = rotate(g, qf, shift);
    for (int k = 0; k < g.num_points; ++k) CHECK(qr[k] == rq[k]);
  }
  auto qm = op.apply(reflect(g, f));
  auto mq = reflect(g, qf);
  for (int k = 0; k < g.num_points; ++k) CHECK(qm[k] == mq[k]);
}

TEST_CASE("pi-shift symmetry is preserved") {
  AngularGrid g = make_grid(25);
  Rng rng(17);
  std::vector<double> f(g.num_points);
  for (int k = 0; k < g.n; ++k) f[k] = rng.uniform();
  for (int k = 0; k < g.n; ++k) f[k + g.n] = f[k];
  auto q = collide(g, Kernel::rod, f);
  for (int k = 0; k < g.n; ++k) CHECK(q[k] == q[k + g.n]);
}

TEST_CASE("bilinear consistency") {
  AngularGrid g = make_grid(25);
  Rng rng(3);
  auto f = random_state(g, rng);
  CollisionOperator op(g, Kernel::rod);
  auto q1 = op.apply(f);
  auto q2 = op.bilinear(f, f);
  for (int k = 0; k < g.num_points; ++k) CHECK(q1[k] == q2[k]);
}

TEST_CASE("matches the brute-force pair enumeration") {
  Rng rng(29);
  for (int n : {5, 9}) {
    AngularGrid g = make_grid(n);
    for (Kernel kernel : {Kernel::rod, Kernel::maxwell}) {
      CollisionOperator op(g, kernel);
      for (int rep = 0; rep < 25; ++rep) {
        auto f = random_state(g, rng);
        auto q = op.apply(f);
        auto oracle = test_oracle::collide_bruteforce(g, kernel, f, f);
        for (int k = 0; k < g.num_points; ++k) {
          CHECK(std::fabs(q[k] - oracle[k]) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("bilinear oracle with distinct arguments") {
  AngularGrid g = make_grid(9);
  Rng rng(31);
  auto ga = random_state(g, rng);
  auto hb = random_state(g, rng);
  auto got = collide_bilinear(g, Kernel::rod, ga, hb);
  auto want = test_oracle::collide_bruteforce(g, Kernel::rod, ga, hb);
  for (int k = 0; k < g.num_points; ++k) {
    CHECK(std::fabs(got[k] - want[k]) <= 1e-14);
  }
}

TEST_CASE("serial reference agrees with the parallel kernel") {
  AngularGrid g = make_grid(51);
  Rng rng(41);
  auto ga = random_state(g, rng);
  auto hb = random_state(g, rng);
  auto fast = collide_bilinear(g, Kernel::rod, ga, hb);
  auto ref = collide_bilinear_serial(g, Kernel::rod, ga, hb);
  for (int k = 0; k < g.num_points; ++k) {
    CHECK(std::fabs(fast[k] - ref[k]) <= 1e-13);
  }
}

TEST_CASE("grid mismatch is rejected") {
  AngularGrid g = make_grid(5);
  std::vector<double> wrong(7, 1.0);
  CHECK_THROWS_AS(collide(g, Kernel::rod, wrong), std::invalid_argument);
}

TEST_CASE("linearized matrix") {
  AngularGrid g = make_grid(25);
  DenseMatrix A = linearized_matrix(g, Kernel::rod, 1.0);
  const int N = g.num_points;

  // constants are in the kernel
  for (int k = 0; k < N; ++k) {
    double s = 0.0;
    for (int l = 0; l < N; ++l) s += A.at(k, l);
    CHECK(std::fabs(s) <= 1e-12);
  }
  // each column response conserves mass
  for (int l = 0; l < N; ++l) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) s += A.at(k, l);
    CHECK(std::fabs(s * g.delta_phi) <= 1e-12);
  }
  // commutes with the cyclic shift exactly (circulant structure)
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      CHECK(A.at(k, l) == A.at((k + 1) % N, (l + 1) % N));
    }
  }
  // symmetric exactly (reflection equivariance makes the symbol even)
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      CHECK(A.at(k, l) == A.at(l, k));
    }
  }
  // matrix action equals the operator definition
  Rng rng(7);
  std::vector<double> f(N);
  for (double& v : f) v = rng.uniform_pm1();
  std::vector<double> uniform(N, 1.0 / (2.0 * M_PI));
  auto q1 = collide_bilinear(g, Kernel::rod, uniform, f);
  auto q2 = collide_bilinear(g, Kernel::rod, f, uniform);
  for (int k = 0; k < N; ++k) {
    double av = 0.0;
    for (int l = 0; l < N; ++l) av += A.at(k, l) * f[l];
    CHECK(av == doctest::Approx(q1[k] + q2[k]).epsilon(1e-12));
  }
}
