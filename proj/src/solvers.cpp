#include "fgld/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgld/best_response.hpp"
#include "fgld/errors.hpp"
#include "fgld/sampling.hpp"

namespace fgld {

std::string to_string(StartMode mode) {
  return mode == StartMode::kDefaults ? "defaults" : "even-split";
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kIterate:
      return "iterate";
    case Strategy::kDescent:
      return "descent";
    case Strategy::kIterateThenDescent:
      return "iterate-then-descent";
    case Strategy::kGrid:
      return "grid";
  }
  return "?";
}

std::optional<StartMode> start_mode_from_string(const std::string& name) {
  if (name == "defaults") return StartMode::kDefaults;
  if (name == "even-split") return StartMode::kEvenSplit;
  return std::nullopt;
}

std::optional<Strategy> strategy_from_string(const std::string& name) {
  for (Strategy s : {Strategy::kIterate, Strategy::kDescent, Strategy::kIterateThenDescent,
                     Strategy::kGrid}) {
    if (to_string(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIterations:
      return "max-iterations";
    case SolveStatus::kStalled:
      return "stalled";
    case SolveStatus::kOracleExhausted:
      return "oracle-exhausted-no-point";
  }
  return "?";
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.tolerance > 0.0) || !std::isfinite(cfg.tolerance)) {
    throw LimitError("tolerance must be positive");
  }
  if (!(cfg.grid_resolution > 0.0) || cfg.grid_resolution > 1.0) {
    throw LimitError("grid resolution must lie in (0, 1]");
  }
  const double cells = 1.0 / cfg.grid_resolution;
  if (std::abs(cells - std::round(cells)) > 1e-9 * cells) {
    throw LimitError("grid resolution must divide 1");
  }
  if (!(cfg.initial_step > 0.0) || !(cfg.step_shrink > 0.0 && cfg.step_shrink < 1.0) ||
      !(cfg.fd_step > 0.0)) {
    throw LimitError("descent step parameters out of range");
  }
}

SolutionMatrix initial_point(const ElectionInstance& instance, StartMode mode) {
  SolutionMatrix x(instance.num_voters(), instance.num_candidates());
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (const Bundle& b : instance.voters[v].bundles) {
      if (b.notion == Notion::kDirect) {
        x(v, b.members.front()) = b.budget;
      } else if (mode == StartMode::kDefaults && b.has_default()) {
        assign_slice(x, v, b, b.default_split);
      } else {
        const double share = b.budget / static_cast<double>(b.members.size());
        for (std::size_t c : b.members) {
          x(v, c) = share;
        }
      }
    }
  }
  return x;
}

namespace {

// Keeps the lowest l-infinity residual seen; earlier points win ties.
struct BestTracker {
  SolutionMatrix point;
  Residual res{0.0, std::numeric_limits<double>::infinity()};

  void offer(const SolutionMatrix& x, const Residual& r) {
    if (r.linf < res.linf) {
      point = x;
      res = r;
    }
  }
};

void finish(SolveReport& report, const BestTracker& best) {
  report.solution = best.point;
  report.residual_l1 = best.res.l1;
  report.residual_linf = best.res.linf;
}

}  // namespace

SolveReport simple_iteration(const ElectionInstance& instance, const SolutionMatrix& x0,
                             const SolverConfig& cfg) {
  validate_config(cfg);
  require_shape(instance, x0);
  SolveReport report;
  BestTracker best;
  SolutionMatrix x = x0;
  for (std::size_t it = 0;; ++it) {
    SolutionMatrix fx = best_response(x, instance);
    const Residual r = residual(x, fx);
    report.trajectory.push_back({it, r.l1, r.linf});
    report.iterations = it;
    if (r.linf <= cfg.tolerance) {
      report.status = SolveStatus::kConverged;
      report.solution = std::move(x);
      report.residual_l1 = r.l1;
      report.residual_linf = r.linf;
      return report;
    }
    best.offer(x, r);
    if (it == cfg.max_iterations) {
      break;
    }
    x = std::move(fx);
  }
  report.status = SolveStatus::kMaxIterations;
  finish(report, best);
  return report;
}

namespace {

double squared_residual(const ElectionInstance& instance, const SolutionMatrix& x) {
  const SolutionMatrix fx = best_response(x, instance);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.flat().size(); ++i) {
    const double gap = fx.flat()[i] - x.flat()[i];
    sum += gap * gap;
  }
  return sum;
}

void require_continuous(const ElectionInstance& instance) {
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) {
      if (!is_continuous(b.notion)) {
        throw UnsupportedNotionError("discontinuous notion unsupported by descent");
      }
    }
  }
}

bool all_continuous(const ElectionInstance& instance) {
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) {
      if (!is_continuous(b.notion)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::size_t> free_coordinates(const ElectionInstance& instance) {
  std::vector<std::size_t> coords;
  const std::size_t m = instance.num_candidates();
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (const Bundle& b : instance.voters[v].bundles) {
      if (b.notion == Notion::kDirect) {
        continue;
      }
      for (std::size_t c : b.members) {
        coords.push_back(v * m + c);
      }
    }
  }
  std::sort(coords.begin(), coords.end());
  return coords;
}

}  // namespace

SolveReport residual_descent(const ElectionInstance& instance, const SolutionMatrix& x0,
                             const SolverConfig& cfg) {
  validate_config(cfg);
  require_shape(instance, x0);
  require_continuous(instance);

  constexpr double kMinStep = 1e-20;
  const double max_step = cfg.initial_step * 1024.0;
  const auto coords = free_coordinates(instance);

  SolveReport report;
  BestTracker best;
  SolutionMatrix x = x0;
  double step = cfg.initial_step;
  std::vector<double> gradient(coords.size());

  for (std::size_t it = 0;; ++it) {
    const SolutionMatrix fx = best_response(x, instance);
    const Residual r = residual(x, fx);
    report.trajectory.push_back({it, r.l1, r.linf});
    report.iterations = it;
    if (r.linf <= cfg.tolerance) {
      report.status = SolveStatus::kConverged;
      report.solution = std::move(x);
      report.residual_l1 = r.l1;
      report.residual_linf = r.linf;
      return report;
    }
    best.offer(x, r);
    if (it == cfg.max_iterations) {
      report.status = SolveStatus::kMaxIterations;
      break;
    }

    double current = 0.0;
    for (std::size_t i = 0; i < x.flat().size(); ++i) {
      const double gap = fx.flat()[i] - x.flat()[i];
      current += gap * gap;
    }
    SolutionMatrix probe = x;
    for (std::size_t k = 0; k < coords.size(); ++k) {
      double& coord = probe.flat()[coords[k]];
      const double saved = coord;
      coord = saved + cfg.fd_step;
      const double up = squared_residual(instance, probe);
      coord = saved - cfg.fd_step;
      const double down = squared_residual(instance, probe);
      coord = saved;
      gradient[k] = (up - down) / (2.0 * cfg.fd_step);
    }

    bool moved = false;
    while (step >= kMinStep) {
      SolutionMatrix trial = x;
      for (std::size_t k = 0; k < coords.size(); ++k) {
        trial.flat()[coords[k]] -= step * gradient[k];
      }
      trial = project_to_feasible(instance, trial);
      if (squared_residual(instance, trial) < current) {
        x = std::move(trial);
        step = std::min(step * 2.0, max_step);
        moved = true;
        break;
      }
      step *= cfg.step_shrink;
    }
    if (!moved) {
      report.status = SolveStatus::kStalled;
      break;
    }
  }
  finish(report, best);
  return report;
}

std::size_t free_dimension(const ElectionInstance& instance) {
  std::size_t dim = 0;
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) {
      if (b.notion != Notion::kDirect) {
        dim += b.members.size() - 1;
      }
    }
  }
  return dim;
}

namespace {

// All ways to put `units` indistinguishable grid units into `cells` cells, in
// order of increasing first cell.
void compositions(std::size_t units, std::size_t cells, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cells == 1) {
    prefix.push_back(units);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::size_t first = 0; first <= units; ++first) {
    prefix.push_back(first);
    compositions(units - first, cells - 1, prefix, out);
    prefix.pop_back();
  }
}

bool lexicographically_less(const SolutionMatrix& a, const SolutionMatrix& b) {
  return std::lexicographical_compare(a.flat().begin(), a.flat().end(), b.flat().begin(),
                                      b.flat().end());
}

struct GridAxis {
  std::size_t voter;
  const Bundle* bundle;
  std::vector<std::vector<double>> slices;
};

}  // namespace

GridResult grid_oracle(const ElectionInstance& instance, const SolverConfig& cfg) {
  validate_config(cfg);
  if (cfg.grid_resolution < kMinGridResolution - 1e-12) {
    throw LimitError("grid resolution below " + std::to_string(kMinGridResolution));
  }
  const std::size_t dim = free_dimension(instance);
  if (dim > kMaxGridDimension) {
    throw LimitError("grid needs " + std::to_string(dim) + " free coordinates, limit is " +
                     std::to_string(kMaxGridDimension));
  }

  SolutionMatrix x = initial_point(instance, StartMode::kEvenSplit);
  std::vector<GridAxis> axes;
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (const Bundle& b : instance.voters[v].bundles) {
      if (b.notion == Notion::kDirect) {
        continue;
      }
      const auto units = static_cast<std::size_t>(
          std::max(1.0, std::round(b.budget / cfg.grid_resolution)));
      std::vector<std::vector<std::size_t>> counts;
      std::vector<std::size_t> prefix;
      compositions(units, b.members.size(), prefix, counts);
      GridAxis axis{v, &b, {}};
      for (const auto& composition : counts) {
        std::vector<double> values;
        for (std::size_t k : composition) {
          values.push_back(static_cast<double>(k) * b.budget / static_cast<double>(units));
        }
        axis.slices.push_back(std::move(values));
      }
      axes.push_back(std::move(axis));
    }
  }

  GridResult result;
  result.minimum.residual = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> odometer(axes.size(), 0);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    assign_slice(x, axes[a].voter, *axes[a].bundle, axes[a].slices[0]);
  }

  while (true) {
    const double r = residual(x, instance).linf;
    ++result.points_visited;
    if (r <= cfg.tolerance) {
      result.within_tolerance.push_back({x, r});
    }
    if (r < result.minimum.residual ||
        (r == result.minimum.residual && lexicographically_less(x, result.minimum.point))) {
      result.minimum = {x, r};
    }
    // Advance the last axis fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++odometer[a] < axes[a].slices.size()) {
        assign_slice(x, axes[a].voter, *axes[a].bundle, axes[a].slices[odometer[a]]);
        break;
      }
      odometer[a] = 0;
      assign_slice(x, axes[a].voter, *axes[a].bundle, axes[a].slices[0]);
      if (a == 0) {
        return result;
      }
    }
    if (axes.empty()) {
      return result;
    }
  }
}

namespace {

void append_trace(SolveReport& into, const SolveReport& from) {
  const std::size_t offset = into.trajectory.empty() ? 0 : into.iterations + 1;
  for (auto sample : from.trajectory) {
    sample.iteration += offset;
    into.trajectory.push_back(sample);
  }
  into.iterations = offset + from.iterations;
}

// Runs descent from `start`, then from seeded random points while it has not
// converged. Returns the best run with the combined trajectory.
SolveReport descent_with_restarts(const ElectionInstance& instance, const SolutionMatrix& start,
                                  const SolverConfig& cfg, SolveReport combined) {
  Rng rng(cfg.seed);
  SolveReport best_run;
  bool have_best = false;
  for (std::size_t attempt = 0; attempt <= cfg.descent_restarts; ++attempt) {
    const SolutionMatrix x0 = attempt == 0 ? start : random_feasible_point(instance, rng);
    SolveReport run = residual_descent(instance, x0, cfg);
    append_trace(combined, run);
    if (!have_best || run.residual_linf < best_run.residual_linf || run.converged()) {
      best_run = std::move(run);
      have_best = true;
    }
    if (best_run.converged()) {
      break;
    }
  }
  combined.status = best_run.status;
  combined.solution = std::move(best_run.solution);
  combined.residual_l1 = best_run.residual_l1;
  combined.residual_linf = best_run.residual_linf;
  return combined;
}

}  // namespace

SolveReport solve(const ElectionInstance& instance, const SolverConfig& cfg,
                  Strategy strategy) {
  require_valid(instance);
  validate_config(cfg);
  const SolutionMatrix x0 = initial_point(instance, cfg.start);

  switch (strategy) {
    case Strategy::kIterate:
      return simple_iteration(instance, x0, cfg);
    case Strategy::kDescent:
      require_continuous(instance);
      return descent_with_restarts(instance, x0, cfg, SolveReport{});
    case Strategy::kIterateThenDescent: {
      SolveReport iterated = simple_iteration(instance, x0, cfg);
      if (iterated.converged() || !all_continuous(instance)) {
        return iterated;
      }
      SolveReport combined;
      append_trace(combined, iterated);
      const SolutionMatrix start = iterated.solution;
      SolveReport descended = descent_with_restarts(instance, start, cfg, std::move(combined));
      if (!descended.converged() && iterated.residual_linf < descended.residual_linf) {
        descended.solution = iterated.solution;
        descended.residual_l1 = iterated.residual_l1;
        descended.residual_linf = iterated.residual_linf;
      }
      return descended;
    }
    case Strategy::kGrid: {
      GridResult grid = grid_oracle(instance, cfg);
      SolveReport report;
      report.status = grid.within_tolerance.empty() ? SolveStatus::kOracleExhausted
                                                    : SolveStatus::kConverged;
      report.solution = grid.minimum.point;
      const Residual r = residual(report.solution, instance);
      report.residual_l1 = r.l1;
      report.residual_linf = r.linf;
      report.iterations = grid.points_visited;
      return report;
    }
  }
  return {};
}

}  // namespace fgld
