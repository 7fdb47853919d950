#ifndef MYXO_RNG_HPP
#define MYXO_RNG_HPP

#include <cstdint>
#include <random>

namespace myxo {

/// Seeded mt19937_64 producing 53-bit uniform doubles. The draw is done by
/// hand (x >> 11) * 2^-53 so output streams do not depend on the standard
/// library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  /// Uniform on [-1, 1].
  double uniform_pm1() { return 2.0 * uniform() - 1.0; }

  static constexpr const char* algorithm = "mt19937_64/canonical53";

 private:
  std::mt19937_64 gen_;
};

}  // namespace myxo

#endif
