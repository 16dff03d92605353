#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgld/model.hpp"

namespace fgld {

enum class StartMode { kDefaults, kEvenSplit };

enum class Strategy { kIterate, kDescent, kIterateThenDescent, kGrid };

std::string to_string(StartMode mode);
std::string to_string(Strategy strategy);
std::optional<StartMode> start_mode_from_string(const std::string& name);
std::optional<Strategy> strategy_from_string(const std::string& name);

struct SolverConfig {
  double tolerance = 1e-6;  // l-infinity residual target
  std::size_t max_iterations = 10000;
  std::uint64_t seed = 0;   // drives descent restarts
  double grid_resolution = 0.01;
  double initial_step = 1.0;
  double step_shrink = 0.5;
  double fd_step = 1e-6;
  std::size_t descent_restarts = 4;
  StartMode start = StartMode::kEvenSplit;
};

/// Throws LimitError when tolerance, resolution or step parameters are unusable.
void validate_config(const SolverConfig& cfg);

enum class SolveStatus {
  kConverged,
  kMaxIterations,
  kStalled,         // descent step underflowed before reaching the tolerance
  kOracleExhausted, // grid holds no point within tolerance
};

std::string to_string(SolveStatus status);

struct TraceSample {
  std::size_t iteration = 0;
  double l1 = 0.0;
  double linf = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kMaxIterations;
  SolutionMatrix solution;  // best point found
  double residual_linf = 0.0;
  double residual_l1 = 0.0;
  std::vector<TraceSample> trajectory;
  std::size_t iterations = 0;

  bool converged() const { return status == SolveStatus::kConverged; }
};

/// Defaults (or even split where a bundle has none), or even split
/// everywhere. DIRECT bundles always hold their budget.
SolutionMatrix initial_point(const ElectionInstance& instance, StartMode mode);

/// x <- f(x) until ||x - f(x)||_inf <= tolerance or the iteration cap.
SolveReport simple_iteration(const ElectionInstance& instance, const SolutionMatrix& x0,
                             const SolverConfig& cfg);

/// Projected descent on ||f(x) - x||_2^2 with central-difference gradients and
/// step halving. Throws UnsupportedNotionError on EP-T bundles.
SolveReport residual_descent(const ElectionInstance& instance, const SolutionMatrix& x0,
                             const SolverConfig& cfg);

struct GridPoint {
  SolutionMatrix point;
  double residual = 0.0;  // l-infinity
};

struct GridResult {
  std::vector<GridPoint> within_tolerance;  // in enumeration order
  GridPoint minimum;  // ties broken by lexicographically smallest matrix
  std::size_t points_visited = 0;
};

inline constexpr std::size_t kMaxGridDimension = 8;
inline constexpr double kMinGridResolution = 0.01;

/// Number of free coordinates the grid enumerates: sum of |S| - 1 over the
/// non-DIRECT bundles.
std::size_t free_dimension(const ElectionInstance& instance);

/// Every feasible matrix whose bundle slices are compositions of
/// round(budget / resolution) grid units. Throws LimitError past
/// kMaxGridDimension free coordinates or below kMinGridResolution.
GridResult grid_oracle(const ElectionInstance& instance, const SolverConfig& cfg);

/// Validates the instance, then runs the chosen strategy.
SolveReport solve(const ElectionInstance& instance, const SolverConfig& cfg,
                  Strategy strategy);

}  // namespace fgld
