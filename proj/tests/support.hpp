#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fgld/counterexamples.hpp"
#include "fgld/model.hpp"
#include "fgld/sampling.hpp"

namespace fgld::test {

inline std::string data_path(const std::string& relative) {
  return std::string(FGLD_DATA_DIR) + "/" + relative;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

inline Bundle direct_bundle(std::size_t voter, std::size_t candidate, double budget) {
  Bundle b;
  b.members = {candidate};
  b.budget = budget;
  b.delegate = voter;
  b.notion = Notion::kDirect;
  return b;
}

// One voter per row; every candidate is a DIRECT singleton holding the row value.
inline ElectionInstance all_direct(const std::vector<std::vector<double>>& rows) {
  ElectionInstance instance;
  for (std::size_t c = 0; c < rows.front().size(); ++c) {
    instance.candidates.push_back("c" + std::to_string(c + 1));
  }
  for (std::size_t v = 0; v < rows.size(); ++v) {
    Voter voter{"v" + std::to_string(v + 1), {}};
    for (std::size_t c = 0; c < rows[v].size(); ++c) {
      voter.bundles.push_back(direct_bundle(v, c, rows[v][c]));
    }
    instance.voters.push_back(std::move(voter));
  }
  return instance;
}

// Simplex projection by bisection on the shift tau in max(y - tau, 0).
inline std::vector<double> bisection_projection(const std::vector<double>& y, double total) {
  double lo = *std::min_element(y.begin(), y.end()) - total - 1.0;
  double hi = *std::max_element(y.begin(), y.end());
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    double sum = 0.0;
    for (double v : y) sum += std::max(v - mid, 0.0);
    (sum > total ? lo : hi) = mid;
  }
  std::vector<double> out;
  for (double v : y) out.push_back(std::max(v - 0.5 * (lo + hi), 0.0));
  return out;
}

// Random valid instance whose delegated bundles all use `notion`.
inline ElectionInstance random_instance(Notion notion, Rng& rng, std::size_t max_voters = 6,
                                        std::size_t max_candidates = 6) {
  GeneratorParams params;
  params.voters = rng.between(1, max_voters);
  params.candidates = rng.between(1, max_candidates);
  params.weight = 0.5 + 60.0 * rng.uniform();
  params.defaults = rng.chance(0.5) ? DefaultMode::kRandom : DefaultMode::kEvenSplit;
  ElectionInstance instance = generate_instance(params, rng);
  for (auto& voter : instance.voters) {
    for (auto& b : voter.bundles) {
      if (b.notion != Notion::kDirect) b.notion = notion;
    }
  }
  return instance;
}

}  // namespace fgld::test
