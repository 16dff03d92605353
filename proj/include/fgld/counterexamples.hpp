#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgld/model.hpp"
#include "fgld/sampling.hpp"

namespace fgld {

// Structural properties the convex-combination best response lacks, each
// with a checker and a seeded random search that looks for a witness.

enum class FindingKind { kContractionViolation, kPseudoMonoViolation, kNonUniqueness };

std::string to_string(FindingKind kind);
std::optional<FindingKind> finding_kind_from_string(const std::string& name);

enum class DefaultMode { kEvenSplit, kRandom };

std::string to_string(DefaultMode mode);
std::optional<DefaultMode> default_mode_from_string(const std::string& name);

struct GeneratorParams {
  std::size_t voters = 10;
  std::size_t candidates = 5;
  double weight = 10.0;
  DefaultMode defaults = DefaultMode::kEvenSplit;
};

/// Fixed-point tolerance for witnesses and the margin certificates must clear.
inline constexpr double kWitnessTolerance = 1e-6;
inline constexpr double kCertificateMargin = 1e-6;

struct ContractionCheck {
  bool violated = false;
  double lhs = 0.0;  // ||f(x) - f(f(x))||_1
  double rhs = 0.0;  // ||x - f(x)||_1
};

/// Requires every delegated bundle to be WCC; throws UnsupportedNotionError
/// otherwise.
ContractionCheck check_contraction_violation(const ElectionInstance& instance,
                                             const SolutionMatrix& x);

/// (y - f(y)) . (y - x) over the flattened matrices, where x must be a fixed
/// point within kWitnessTolerance (throws Error otherwise). Negative values
/// certify that pseudo-monotonicity fails.
double check_pseudomono_violation(const ElectionInstance& instance, const SolutionMatrix& x,
                                  const SolutionMatrix& y);

struct NonUniquenessCheck {
  bool distinct_fixed_points = false;
  double distance = 0.0;  // ||x1 - x2||_1
};

/// True when both points are within `tolerance` of being fixed and lie more
/// than `separation` apart in l1.
NonUniquenessCheck check_nonuniqueness(const ElectionInstance& instance,
                                       const SolutionMatrix& x1, const SolutionMatrix& x2,
                                       double tolerance, double separation);

struct SearchFinding {
  FindingKind kind = FindingKind::kContractionViolation;
  ElectionInstance instance;
  std::vector<SolutionMatrix> witnesses;  // one point, or (fixed point, probe) / (x1, x2)
  std::vector<double> certificate;        // (lhs, rhs) | (dot) | (distance)
  GeneratorParams params;
  std::uint64_t seed = 0;
  std::size_t attempt = 0;
};

struct SearchOptions {
  std::size_t budget = 200;       // instances to generate
  double separation = 0.1;        // non-uniqueness l1 threshold
  std::size_t starts = 24;        // random starts per instance (non-uniqueness)
  std::size_t probes = 400;       // random points per instance (contraction, pseudo-mono)
  std::size_t max_iterations = 20000;
};

/// Random valid instance: random partitions, budgets in twentieths, random
/// delegates, every delegated bundle WCC with the given weight. A voter with
/// no one else to delegate to votes directly.
ElectionInstance generate_instance(const GeneratorParams& params, Rng& rng);

/// Seeded search; attempt k uses a generator seeded from (seed, k), so the
/// same seed and budget give the same result. Returns the first finding.
std::optional<SearchFinding> search_violation(FindingKind kind, const GeneratorParams& params,
                                              std::uint64_t seed,
                                              const SearchOptions& options = {});

/// Recomputes the certificate from the stored instance and witnesses.
std::vector<double> recompute_certificate(const SearchFinding& finding);

/// Whether the stored witnesses certify the finding's kind with the margin.
bool finding_holds(const SearchFinding& finding, double separation);

}  // namespace fgld
