#include "fgld/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fgld {

namespace rules {
namespace {

double l1(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> rescale(std::span<const double> v, double norm, double budget) {
  const double factor = budget / norm;
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [factor](double a) { return a * factor; });
  return out;
}

}  // namespace

std::vector<double> exact(std::span<const double> delegate, std::span<const double> current,
                          double budget) {
  const double support = l1(delegate);
  if (support > 0.0) {
    return rescale(delegate, support, budget);
  }
  return {current.begin(), current.end()};
}

std::vector<double> thresholded(std::span<const double> delegate,
                                std::span<const double> default_split, double threshold,
                                double budget) {
  const double support = l1(delegate);
  if (support >= threshold && support > 0.0) {
    return rescale(delegate, support, budget);
  }
  return {default_split.begin(), default_split.end()};
}

std::vector<double> interpolation_numerator(std::span<const double> delegate,
                                            std::span<const double> default_split,
                                            double threshold) {
  const double gap = threshold - l1(delegate);
  std::vector<double> out(delegate.size());
  for (std::size_t i = 0; i < delegate.size(); ++i) {
    out[i] = delegate[i] + gap * default_split[i];
  }
  return out;
}

std::vector<double> interpolated_branch(std::span<const double> delegate,
                                        std::span<const double> default_split,
                                        double threshold, double budget) {
  auto numerator = interpolation_numerator(delegate, default_split, threshold);
  const double norm = l1(numerator);
  if (norm <= 0.0) {
    return std::vector<double>(delegate.size(), 0.0);
  }
  return rescale(numerator, norm, budget);
}

std::vector<double> interpolated(std::span<const double> delegate,
                                 std::span<const double> default_split, double threshold,
                                 double budget) {
  const double support = l1(delegate);
  if (support >= threshold && support > 0.0) {
    return rescale(delegate, support, budget);
  }
  return interpolated_branch(delegate, default_split, threshold, budget);
}

std::vector<double> convex_combination(std::span<const double> delegate,
                                       std::span<const double> default_split, double weight,
                                       double budget) {
  std::vector<double> numerator(delegate.size());
  for (std::size_t i = 0; i < delegate.size(); ++i) {
    numerator[i] = default_split[i] + weight * delegate[i];
  }
  const double norm = l1(numerator);
  if (norm <= 0.0) {
    return std::vector<double>(delegate.size(), 0.0);
  }
  return rescale(numerator, norm, budget);
}

}  // namespace rules

namespace {

const Bundle& bundle_with_notion(const ElectionInstance& instance, std::size_t voter,
                                 std::size_t bundle_index, Notion expected) {
  const Bundle& b = instance.voters.at(voter).bundles.at(bundle_index);
  if (b.notion != expected) {
    throw std::invalid_argument("bundle notion is " + to_string(b.notion) + ", expected " +
                                to_string(expected));
  }
  return b;
}

ResponseVector respond(const SolutionMatrix& x, std::size_t voter, const Bundle& b) {
  if (b.notion == Notion::kDirect) {
    return {{b.budget}, b.budget};
  }
  const auto delegate = slice(x, b.delegate, b);
  switch (b.notion) {
    case Notion::kEP:
      return {rules::exact(delegate, slice(x, voter, b), b.budget), b.budget};
    case Notion::kEPT:
      return {rules::thresholded(delegate, b.default_split, b.threshold(), b.budget), b.budget};
    case Notion::kEPTI:
      return {rules::interpolated(delegate, b.default_split, b.threshold(), b.budget),
              b.budget};
    case Notion::kWCC:
      return {rules::convex_combination(delegate, b.default_split, *b.weight, b.budget),
              b.budget};
    case Notion::kDirect:
      break;
  }
  return {};
}

}  // namespace

ResponseVector br_ep(const ElectionInstance& instance, const SolutionMatrix& x,
                     std::size_t voter, std::size_t bundle_index) {
  return respond(x, voter, bundle_with_notion(instance, voter, bundle_index, Notion::kEP));
}

ResponseVector br_ept(const ElectionInstance& instance, const SolutionMatrix& x,
                      std::size_t voter, std::size_t bundle_index) {
  return respond(x, voter,
                 bundle_with_notion(instance, voter, bundle_index, Notion::kEPT));
}

ResponseVector br_epti(const ElectionInstance& instance, const SolutionMatrix& x,
                       std::size_t voter, std::size_t bundle_index) {
  return respond(x, voter,
                 bundle_with_notion(instance, voter, bundle_index, Notion::kEPTI));
}

ResponseVector br_wcc(const ElectionInstance& instance, const SolutionMatrix& x,
                      std::size_t voter, std::size_t bundle_index) {
  return respond(x, voter,
                 bundle_with_notion(instance, voter, bundle_index, Notion::kWCC));
}

ResponseVector bundle_response(const ElectionInstance& instance, const SolutionMatrix& x,
                               std::size_t voter, std::size_t bundle_index) {
  return respond(x, voter, instance.voters.at(voter).bundles.at(bundle_index));
}

SolutionMatrix best_response(const SolutionMatrix& x, const ElectionInstance& instance) {
  require_shape(instance, x);
  SolutionMatrix out(x.rows(), x.cols());
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (const Bundle& b : instance.voters[v].bundles) {
      assign_slice(out, v, b, respond(x, v, b).values);
    }
  }
  return out;
}

double RegretReport::max_voter_regret() const {
  return per_voter.empty() ? 0.0 : *std::max_element(per_voter.begin(), per_voter.end());
}

RegretReport regret(const SolutionMatrix& x, const ElectionInstance& instance) {
  const SolutionMatrix fx = best_response(x, instance);
  RegretReport report;
  report.per_voter.assign(x.rows(), 0.0);
  for (std::size_t v = 0; v < x.rows(); ++v) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double gap = std::abs(fx(v, c) - x(v, c));
      report.per_voter[v] += gap;
      report.max_linf = std::max(report.max_linf, gap);
    }
    report.total_l1 += report.per_voter[v];
  }
  return report;
}

Residual residual(const SolutionMatrix& x, const SolutionMatrix& fx) {
  return {l1_distance(x, fx), linf_distance(x, fx)};
}

Residual residual(const SolutionMatrix& x, const ElectionInstance& instance) {
  return residual(x, best_response(x, instance));
}

}  // namespace fgld
