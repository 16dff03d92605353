#include "fgld/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgld/best_response.hpp"
#include "fgld/errors.hpp"
#include "fgld/solvers.hpp"

namespace fgld {

std::string to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::kContractionViolation:
      return "contraction-violation";
    case FindingKind::kPseudoMonoViolation:
      return "pseudo-mono-violation";
    case FindingKind::kNonUniqueness:
      return "non-uniqueness";
  }
  return "?";
}

std::optional<FindingKind> finding_kind_from_string(const std::string& name) {
  for (FindingKind k : {FindingKind::kContractionViolation, FindingKind::kPseudoMonoViolation,
                        FindingKind::kNonUniqueness}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  return std::nullopt;
}

std::string to_string(DefaultMode mode) {
  return mode == DefaultMode::kEvenSplit ? "even-split" : "random";
}

std::optional<DefaultMode> default_mode_from_string(const std::string& name) {
  if (name == "even-split") return DefaultMode::kEvenSplit;
  if (name == "random") return DefaultMode::kRandom;
  return std::nullopt;
}

namespace {

void require_wcc(const ElectionInstance& instance) {
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) {
      if (b.notion != Notion::kWCC && b.notion != Notion::kDirect) {
        throw UnsupportedNotionError("counterexample checks need WCC delegations, voter " +
                                     voter.id + " uses " + to_string(b.notion));
      }
    }
  }
}

double dot_with_residual(const ElectionInstance& instance, const SolutionMatrix& fixed,
                         const SolutionMatrix& y) {
  const SolutionMatrix fy = best_response(y, instance);
  double dot = 0.0;
  for (std::size_t i = 0; i < y.flat().size(); ++i) {
    dot += (y.flat()[i] - fy.flat()[i]) * (y.flat()[i] - fixed.flat()[i]);
  }
  return dot;
}

}  // namespace

ContractionCheck check_contraction_violation(const ElectionInstance& instance,
                                             const SolutionMatrix& x) {
  require_wcc(instance);
  const SolutionMatrix fx = best_response(x, instance);
  const SolutionMatrix ffx = best_response(fx, instance);
  ContractionCheck check;
  check.lhs = l1_distance(fx, ffx);
  check.rhs = l1_distance(x, fx);
  check.violated = check.lhs > check.rhs;
  return check;
}

double check_pseudomono_violation(const ElectionInstance& instance, const SolutionMatrix& x,
                                  const SolutionMatrix& y) {
  require_wcc(instance);
  require_shape(instance, y);
  const double fixed_residual = residual(x, instance).linf;
  if (fixed_residual > kWitnessTolerance) {
    throw Error("reference point is not a fixed point (residual " +
                std::to_string(fixed_residual) + ")");
  }
  return dot_with_residual(instance, x, y);
}

NonUniquenessCheck check_nonuniqueness(const ElectionInstance& instance,
                                       const SolutionMatrix& x1, const SolutionMatrix& x2,
                                       double tolerance, double separation) {
  require_wcc(instance);
  NonUniquenessCheck check;
  check.distance = l1_distance(x1, x2);
  check.distinct_fixed_points = residual(x1, instance).linf <= tolerance &&
                                residual(x2, instance).linf <= tolerance &&
                                check.distance > separation;
  return check;
}

ElectionInstance generate_instance(const GeneratorParams& params, Rng& rng) {
  constexpr std::size_t kUnits = 20;  // budgets are multiples of 1/20
  const std::size_t n = params.voters;
  const std::size_t m = params.candidates;
  if (n == 0 || m == 0 || m > kUnits) {
    throw LimitError("generator needs 1..20 candidates and at least one voter");
  }
  if (!(params.weight > 0.0)) {
    throw LimitError("generator weight must be positive");
  }

  ElectionInstance instance;
  for (std::size_t c = 0; c < m; ++c) {
    instance.candidates.push_back("c" + std::to_string(c + 1));
  }
  for (std::size_t v = 0; v < n; ++v) {
    instance.voters.push_back(Voter{"v" + std::to_string(v + 1), {}});
  }

  for (std::size_t v = 0; v < n; ++v) {
    auto& bundles = instance.voters[v].bundles;
    if (n == 1) {
      // Nobody to delegate to: direct votes over all candidates.
      std::vector<std::size_t> units(m, 0);
      for (std::size_t u = 0; u < kUnits; ++u) {
        ++units[rng.below(m)];
      }
      for (std::size_t c = 0; c < m; ++c) {
        Bundle b;
        b.members = {c};
        b.budget = static_cast<double>(units[c]) / kUnits;
        b.delegate = v;
        b.notion = Notion::kDirect;
        bundles.push_back(std::move(b));
      }
      continue;
    }

    const std::size_t k = rng.between(1, m);
    std::vector<std::size_t> order(m);
    for (std::size_t c = 0; c < m; ++c) order[c] = c;
    for (std::size_t i = m; i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::vector<std::vector<std::size_t>> parts(k);
    for (std::size_t i = 0; i < m; ++i) {
      parts[i < k ? i : rng.below(k)].push_back(order[i]);
    }

    // k positive parts of kUnits: k - 1 distinct cut points in 1..kUnits-1.
    std::vector<std::size_t> cuts;
    while (cuts.size() + 1 < k) {
      const std::size_t cut = rng.between(1, kUnits - 1);
      if (std::find(cuts.begin(), cuts.end(), cut) == cuts.end()) {
        cuts.push_back(cut);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(kUnits);

    for (std::size_t s = 0; s < k; ++s) {
      Bundle b;
      b.members = parts[s];
      std::sort(b.members.begin(), b.members.end());
      b.budget = static_cast<double>(cuts[s + 1] - cuts[s]) / kUnits;
      std::size_t delegate = rng.below(n - 1);
      b.delegate = delegate >= v ? delegate + 1 : delegate;
      b.notion = Notion::kWCC;
      b.weight = params.weight;
      const double size = static_cast<double>(b.members.size());
      if (params.defaults == DefaultMode::kEvenSplit) {
        b.default_split.assign(b.members.size(), b.budget / size);
      } else {
        std::vector<double> shares(b.members.size());
        double total = 0.0;
        while (total == 0.0) {
          total = 0.0;
          for (double& share : shares) {
            share = static_cast<double>(rng.below(5));
            total += share;
          }
        }
        for (double& share : shares) {
          share = share / total * b.budget;
        }
        b.default_split = std::move(shares);
      }
      bundles.push_back(std::move(b));
    }
  }
  return instance;
}

namespace {

std::uint64_t mix(std::uint64_t z) {
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt) {
  return mix(seed ^ mix(static_cast<std::uint64_t>(attempt) + 1));
}

// Random direction that keeps every bundle sum fixed, scaled to l1 size `size`.
SolutionMatrix tangent_step(const ElectionInstance& instance, Rng& rng, double size) {
  SolutionMatrix h(instance.num_voters(), instance.num_candidates());
  double norm = 0.0;
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (const Bundle& b : instance.voters[v].bundles) {
      if (b.members.size() < 2 || b.notion == Notion::kDirect) {
        continue;
      }
      double mean = 0.0;
      std::vector<double> draw(b.members.size());
      for (double& d : draw) {
        d = rng.uniform() - 0.5;
        mean += d;
      }
      mean /= static_cast<double>(draw.size());
      for (std::size_t i = 0; i < draw.size(); ++i) {
        h(v, b.members[i]) = draw[i] - mean;
        norm += std::abs(draw[i] - mean);
      }
    }
  }
  if (norm > 0.0) {
    for (double& value : h.flat()) {
      value *= size / norm;
    }
  }
  return h;
}

// x + h projected back onto the feasible set.
SolutionMatrix moved(const ElectionInstance& instance, const SolutionMatrix& x,
                     const SolutionMatrix& h) {
  SolutionMatrix y = x;
  for (std::size_t i = 0; i < y.flat().size(); ++i) {
    y.flat()[i] += h.flat()[i];
  }
  return project_to_feasible(instance, y);
}

std::optional<SolutionMatrix> find_fixed_point(const ElectionInstance& instance,
                                               const SolutionMatrix& start,
                                               std::size_t max_iterations) {
  SolverConfig cfg;
  cfg.tolerance = kWitnessTolerance;
  cfg.max_iterations = max_iterations;
  SolveReport report = simple_iteration(instance, start, cfg);
  if (!report.converged()) {
    cfg.max_iterations = std::min<std::size_t>(max_iterations, 2000);
    report = residual_descent(instance, report.solution, cfg);
  }
  if (!report.converged()) {
    return std::nullopt;
  }
  return report.solution;
}

bool has_delegation(const ElectionInstance& instance) {
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) {
      if (b.notion != Notion::kDirect && b.members.size() > 1) {
        return true;
      }
    }
  }
  return false;
}

std::optional<SearchFinding> contraction_attempt(const ElectionInstance& instance, Rng& rng,
                                                 const SearchOptions& options) {
  auto accept = [&](const SolutionMatrix& x) -> std::optional<SearchFinding> {
    const auto check = check_contraction_violation(instance, x);
    if (check.lhs > check.rhs + kCertificateMargin) {
      SearchFinding finding;
      finding.kind = FindingKind::kContractionViolation;
      finding.witnesses = {x};
      finding.certificate = {check.lhs, check.rhs};
      return finding;
    }
    return std::nullopt;
  };

  // Successive iterates: any growth of the step length is a witness.
  for (std::size_t p = 0; p < options.probes; ++p) {
    SolutionMatrix x = random_feasible_point(instance, rng, 0.5);
    for (std::size_t step = 0; step < 8; ++step) {
      if (auto found = accept(x)) {
        return found;
      }
      x = best_response(x, instance);
    }
  }
  // Small moves away from a fixed point probe the local expansion of f.
  const auto fixed = find_fixed_point(instance, random_feasible_point(instance, rng),
                                      options.max_iterations);
  if (fixed) {
    for (std::size_t p = 0; p < options.probes; ++p) {
      const double size = std::pow(10.0, -1.0 - 2.0 * rng.uniform());
      if (auto found = accept(moved(instance, *fixed, tangent_step(instance, rng, size)))) {
        return found;
      }
    }
  }
  return std::nullopt;
}

std::optional<SearchFinding> pseudomono_attempt(const ElectionInstance& instance, Rng& rng,
                                                const SearchOptions& options) {
  const auto fixed = find_fixed_point(instance, random_feasible_point(instance, rng),
                                      options.max_iterations);
  if (!fixed) {
    return std::nullopt;
  }
  SolutionMatrix best_y = *fixed;
  double best = 0.0;
  auto offer = [&](const SolutionMatrix& y) {
    const double dot = dot_with_residual(instance, *fixed, y);
    if (dot < best) {
      best = dot;
      best_y = y;
    }
  };
  for (std::size_t p = 0; p < options.probes; ++p) {
    offer(random_feasible_point(instance, rng, 0.3));
    const double size = std::pow(10.0, -2.0 * rng.uniform());
    offer(moved(instance, *fixed, tangent_step(instance, rng, size)));
  }
  // Local refinement around the best probe.
  for (std::size_t p = 0; p < options.probes; ++p) {
    const double size = std::pow(10.0, -1.0 - 2.0 * rng.uniform());
    offer(moved(instance, best_y, tangent_step(instance, rng, size)));
  }
  if (best > -kCertificateMargin) {
    return std::nullopt;
  }
  SearchFinding finding;
  finding.kind = FindingKind::kPseudoMonoViolation;
  finding.witnesses = {*fixed, best_y};
  finding.certificate = {best};
  return finding;
}

std::optional<SearchFinding> nonuniqueness_attempt(const ElectionInstance& instance, Rng& rng,
                                                   const SearchOptions& options) {
  std::vector<SolutionMatrix> found;
  for (std::size_t s = 0; s < options.starts; ++s) {
    const double bias = static_cast<double>(s % 3) / 2.0;
    auto fixed =
        find_fixed_point(instance, random_feasible_point(instance, rng, bias), options.max_iterations);
    if (!fixed) {
      continue;
    }
    for (const auto& other : found) {
      const double distance = l1_distance(other, *fixed);
      if (distance > options.separation) {
        SearchFinding finding;
        finding.kind = FindingKind::kNonUniqueness;
        finding.witnesses = {other, *fixed};
        finding.certificate = {distance};
        return finding;
      }
    }
    found.push_back(std::move(*fixed));
  }
  return std::nullopt;
}

}  // namespace

std::optional<SearchFinding> search_violation(FindingKind kind, const GeneratorParams& params,
                                              std::uint64_t seed,
                                              const SearchOptions& options) {
  for (std::size_t attempt = 0; attempt < options.budget; ++attempt) {
    Rng rng(attempt_seed(seed, attempt));
    ElectionInstance instance = generate_instance(params, rng);
    if (!has_delegation(instance)) {
      continue;
    }
    std::optional<SearchFinding> finding;
    switch (kind) {
      case FindingKind::kContractionViolation:
        finding = contraction_attempt(instance, rng, options);
        break;
      case FindingKind::kPseudoMonoViolation:
        finding = pseudomono_attempt(instance, rng, options);
        break;
      case FindingKind::kNonUniqueness:
        finding = nonuniqueness_attempt(instance, rng, options);
        break;
    }
    if (finding) {
      finding->instance = std::move(instance);
      finding->params = params;
      finding->seed = seed;
      finding->attempt = attempt;
      return finding;
    }
  }
  return std::nullopt;
}

std::vector<double> recompute_certificate(const SearchFinding& finding) {
  const auto& w = finding.witnesses;
  switch (finding.kind) {
    case FindingKind::kContractionViolation: {
      if (w.size() != 1) throw Error("contraction finding needs one witness");
      const auto check = check_contraction_violation(finding.instance, w[0]);
      return {check.lhs, check.rhs};
    }
    case FindingKind::kPseudoMonoViolation:
      if (w.size() != 2) throw Error("pseudo-monotonicity finding needs two witnesses");
      return {check_pseudomono_violation(finding.instance, w[0], w[1])};
    case FindingKind::kNonUniqueness:
      if (w.size() != 2) throw Error("non-uniqueness finding needs two witnesses");
      return {l1_distance(w[0], w[1])};
  }
  return {};
}

bool finding_holds(const SearchFinding& finding, double separation) {
  const auto certificate = recompute_certificate(finding);
  switch (finding.kind) {
    case FindingKind::kContractionViolation:
      return certificate[0] > certificate[1] + kCertificateMargin;
    case FindingKind::kPseudoMonoViolation:
      return certificate[0] <= -kCertificateMargin;
    case FindingKind::kNonUniqueness:
      return check_nonuniqueness(finding.instance, finding.witnesses[0], finding.witnesses[1],
                                 kWitnessTolerance, separation)
          .distinct_fixed_points;
  }
  return false;
}

}  // namespace fgld
