#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "fgld/model.hpp"

namespace fgld {

/// Seeded generator whose streams are identical on every platform: the
/// standard distributions are implementation-defined, so draws are built
/// directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound must be positive.
  std::size_t below(std::size_t bound);

  /// Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Random point of the feasible set: flat-Dirichlet splits per bundle, or,
/// with probability `corner_bias`, a whole bundle budget on one member.
SolutionMatrix random_feasible_point(const ElectionInstance& instance, Rng& rng,
                                     double corner_bias = 0.0);

}  // namespace fgld
