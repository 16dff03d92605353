#include "fgld/sampling.hpp"

#include <cmath>
#include <limits>

namespace fgld {

std::size_t Rng::below(std::size_t bound) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t range = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = engine_();
  while (draw >= limit) {
    draw = engine_();
  }
  return static_cast<std::size_t>(draw % range);
}

SolutionMatrix random_feasible_point(const ElectionInstance& instance, Rng& rng,
                                     double corner_bias) {
  SolutionMatrix x(instance.num_voters(), instance.num_candidates());
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (const Bundle& b : instance.voters[v].bundles) {
      if (b.members.size() == 1) {
        x(v, b.members.front()) = b.budget;
        continue;
      }
      if (rng.chance(corner_bias)) {
        x(v, b.members[rng.below(b.members.size())]) = b.budget;
        continue;
      }
      std::vector<double> draws(b.members.size());
      double total = 0.0;
      for (double& d : draws) {
        d = -std::log1p(-rng.uniform());
        total += d;
      }
      for (std::size_t i = 0; i < draws.size(); ++i) {
        x(v, b.members[i]) = total > 0.0 ? draws[i] / total * b.budget
                                         : b.budget / static_cast<double>(draws.size());
      }
    }
  }
  return x;
}

}  // namespace fgld
