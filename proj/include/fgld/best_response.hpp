#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fgld/model.hpp"

namespace fgld {

/// A voter's desired split of one bundle; `values` sums to `weight`.
struct ResponseVector {
  std::vector<double> values;
  double weight = 0.0;
};

// Bundle-local proportionality rules. Each takes the delegate's slice over the
// bundle and returns a vector of l1-norm `budget`.
namespace rules {

/// Delegate's ratios scaled to `budget`. When the delegate gives the bundle no
/// support every split is acceptable and `current` is returned unchanged.
std::vector<double> exact(std::span<const double> delegate, std::span<const double> current,
                          double budget);

/// Exact proportionality while the delegate's support is at least
/// `threshold`, otherwise the default verbatim.
std::vector<double> thresholded(std::span<const double> delegate,
                                std::span<const double> default_split, double threshold,
                                double budget);

/// delegate + (threshold - |delegate|) * default, before rescaling.
std::vector<double> interpolation_numerator(std::span<const double> delegate,
                                            std::span<const double> default_split,
                                            double threshold);

/// The below-threshold branch of the interpolated rule, applied regardless of
/// the delegate's support.
std::vector<double> interpolated_branch(std::span<const double> delegate,
                                        std::span<const double> default_split,
                                        double threshold, double budget);

/// Exact proportionality at or above `threshold`, interpolation below it.
std::vector<double> interpolated(std::span<const double> delegate,
                                 std::span<const double> default_split, double threshold,
                                 double budget);

/// (default + weight * delegate) rescaled to `budget`; zeros if that sum is 0.
std::vector<double> convex_combination(std::span<const double> delegate,
                                       std::span<const double> default_split, double weight,
                                       double budget);

}  // namespace rules

/// Best response of `voter` on bundle `bundle_index`, one per notion. Each
/// throws std::invalid_argument when the bundle has a different notion.
ResponseVector br_ep(const ElectionInstance& instance, const SolutionMatrix& x,
                     std::size_t voter, std::size_t bundle_index);
ResponseVector br_ept(const ElectionInstance& instance, const SolutionMatrix& x,
                      std::size_t voter, std::size_t bundle_index);
ResponseVector br_epti(const ElectionInstance& instance, const SolutionMatrix& x,
                       std::size_t voter, std::size_t bundle_index);
ResponseVector br_wcc(const ElectionInstance& instance, const SolutionMatrix& x,
                      std::size_t voter, std::size_t bundle_index);

/// Dispatches on the bundle's notion; DIRECT bundles return their budget.
ResponseVector bundle_response(const ElectionInstance& instance, const SolutionMatrix& x,
                               std::size_t voter, std::size_t bundle_index);

/// The best-response map f applied to every voter and bundle.
SolutionMatrix best_response(const SolutionMatrix& x, const ElectionInstance& instance);

struct RegretReport {
  std::vector<double> per_voter;  // ||f(x)_v - x_v||_1
  double total_l1 = 0.0;
  double max_linf = 0.0;          // ||f(x) - x||_inf over all entries

  double max_voter_regret() const;
};

RegretReport regret(const SolutionMatrix& x, const ElectionInstance& instance);

/// l1 and l-infinity size of x - f(x).
struct Residual {
  double l1 = 0.0;
  double linf = 0.0;
};

Residual residual(const SolutionMatrix& x, const SolutionMatrix& fx);
Residual residual(const SolutionMatrix& x, const ElectionInstance& instance);

}  // namespace fgld
