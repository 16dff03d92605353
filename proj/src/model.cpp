#include "fgld/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "fgld/numeric_text.hpp"

namespace fgld {

std::string to_string(Notion notion) {
  switch (notion) {
    case Notion::kEP:
      return "EP";
    case Notion::kEPT:
      return "EP-T";
    case Notion::kEPTI:
      return "EP-TI";
    case Notion::kWCC:
      return "WCC";
    case Notion::kDirect:
      return "DIRECT";
  }
  return "?";
}

std::optional<Notion> notion_from_string(const std::string& name) {
  for (Notion n : {Notion::kEP, Notion::kEPT, Notion::kEPTI, Notion::kWCC, Notion::kDirect}) {
    if (to_string(n) == name) {
      return n;
    }
  }
  return std::nullopt;
}

bool is_continuous(Notion notion) { return notion != Notion::kEPT; }

double Bundle::threshold() const {
  if (!weight) {
    throw std::logic_error("bundle has no weight, threshold undefined");
  }
  return 1.0 / *weight;
}

SolutionMatrix::SolutionMatrix(std::size_t voters, std::size_t candidates,
                               std::vector<double> values)
    : rows_(voters), cols_(candidates), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw DimensionError("matrix data does not match its shape");
  }
}

SolutionMatrix SolutionMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  SolutionMatrix m(rows.size(), cols);
  for (std::size_t v = 0; v < rows.size(); ++v) {
    if (rows[v].size() != cols) {
      throw DimensionError("ragged rows");
    }
    std::copy(rows[v].begin(), rows[v].end(), m.row(v).begin());
  }
  return m;
}

std::vector<double> slice(const SolutionMatrix& x, std::size_t voter, const Bundle& bundle) {
  std::vector<double> out;
  out.reserve(bundle.members.size());
  for (std::size_t c : bundle.members) {
    out.push_back(x(voter, c));
  }
  return out;
}

double slice_sum(const SolutionMatrix& x, std::size_t voter, const Bundle& bundle) {
  double sum = 0.0;
  for (std::size_t c : bundle.members) {
    sum += x(voter, c);
  }
  return sum;
}

void assign_slice(SolutionMatrix& x, std::size_t voter, const Bundle& bundle,
                  std::span<const double> values) {
  for (std::size_t i = 0; i < bundle.members.size(); ++i) {
    x(voter, bundle.members[i]) = values[i];
  }
}

namespace {

void require_same_shape(const SolutionMatrix& a, const SolutionMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrices differ in shape");
  }
}

}  // namespace

double l1_distance(const SolutionMatrix& a, const SolutionMatrix& b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i) {
    sum += std::abs(a.flat()[i] - b.flat()[i]);
  }
  return sum;
}

double linf_distance(const SolutionMatrix& a, const SolutionMatrix& b) {
  require_same_shape(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i) {
    worst = std::max(worst, std::abs(a.flat()[i] - b.flat()[i]));
  }
  return worst;
}

bool ValidationReport::has_rule(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(const ElectionInstance& instance) : instance_(instance) {}

  void add(std::optional<std::size_t> voter, std::optional<std::size_t> bundle,
           std::string rule, std::string message) {
    std::ostringstream text;
    if (voter) {
      text << "voter " << instance_.voters[*voter].id;
      if (bundle) {
        text << " bundle " << *bundle;
      }
      text << ": ";
    }
    text << message;
    report_.violations.push_back({voter, bundle, std::move(rule), text.str()});
  }

  ValidationReport take() { return std::move(report_); }

 private:
  const ElectionInstance& instance_;
  ValidationReport report_;
};

void check_unique(const std::vector<std::string>& ids, const std::string& what,
                  ReportBuilder& out) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      out.add(std::nullopt, std::nullopt, "duplicate-" + what, "duplicate " + what + " '" + id + "'");
    }
  }
}

void check_parameters(const Bundle& b, std::size_t v, std::size_t s, double tol,
                      ReportBuilder& out) {
  const bool needs_parameters =
      b.notion == Notion::kEPT || b.notion == Notion::kEPTI || b.notion == Notion::kWCC;
  if (b.weight) {
    if (!std::isfinite(*b.weight) || *b.weight <= 0.0) {
      out.add(v, s, "weight-not-positive",
              "weight must be positive, got " + format_shortest(*b.weight));
    }
  } else if (needs_parameters) {
    out.add(v, s, "missing-weight", to_string(b.notion) + " bundle requires a weight");
  }

  if (b.has_default()) {
    if (b.default_split.size() != b.members.size()) {
      out.add(v, s, "default-size", "default has " + std::to_string(b.default_split.size()) +
                                        " entries for " + std::to_string(b.members.size()) +
                                        " members");
      return;
    }
    double norm = 0.0;
    for (double d : b.default_split) {
      if (!std::isfinite(d) || d < 0.0) {
        out.add(v, s, "default-negative", "default entries must be non-negative");
        return;
      }
      norm += d;
    }
    if (std::abs(norm - b.budget) > tol) {
      out.add(v, s, "default-norm", "default sums to " + format_shortest(norm) +
                                        " but the budget is " + format_shortest(b.budget));
    }
  } else if (needs_parameters) {
    out.add(v, s, "missing-default", to_string(b.notion) + " bundle requires a default");
  }
}

}  // namespace

ValidationReport validate_instance(const ElectionInstance& instance, double tolerance) {
  ReportBuilder out(instance);
  const std::size_t m = instance.num_candidates();
  const std::size_t n = instance.num_voters();

  if (m == 0) {
    out.add(std::nullopt, std::nullopt, "no-candidates", "instance has no candidates");
  }
  if (n == 0) {
    out.add(std::nullopt, std::nullopt, "no-voters", "instance has no voters");
  }
  check_unique(instance.candidates, "candidate", out);
  std::vector<std::string> voter_ids;
  for (const auto& voter : instance.voters) {
    voter_ids.push_back(voter.id);
  }
  check_unique(voter_ids, "voter", out);

  for (std::size_t v = 0; v < n; ++v) {
    const auto& bundles = instance.voters[v].bundles;
    if (bundles.empty()) {
      out.add(v, std::nullopt, "no-bundles", "voter has no bundles");
      continue;
    }
    std::vector<int> cover(m, 0);
    double budget_sum = 0.0;
    for (std::size_t s = 0; s < bundles.size(); ++s) {
      const Bundle& b = bundles[s];
      if (b.members.empty()) {
        out.add(v, s, "empty-bundle", "bundle has no members");
      }
      for (std::size_t c : b.members) {
        if (c >= m) {
          out.add(v, s, "member-out-of-range", "candidate index " + std::to_string(c) +
                                                   " out of range");
        } else {
          ++cover[c];
        }
      }
      if (!std::isfinite(b.budget) || b.budget < 0.0 || b.budget > 1.0 + tolerance) {
        out.add(v, s, "budget-range", "budget " + format_shortest(b.budget) + " outside [0, 1]");
      } else {
        budget_sum += b.budget;
      }

      if (b.delegate >= n) {
        out.add(v, s, "delegate-out-of-range", "delegate index " + std::to_string(b.delegate) +
                                                   " out of range");
      }
      const bool self = b.delegate == v;
      if (self && b.members.size() != 1) {
        out.add(v, s, "self-delegation-size", "self-delegated bundle must be a singleton");
      }
      if (self != (b.notion == Notion::kDirect)) {
        out.add(v, s, "self-delegation-notion",
                "DIRECT is exactly the self-delegated case, got " + to_string(b.notion) +
                    (self ? " on a self-delegation" : " with another delegate"));
      }
      if (b.budget == 0.0 && !(self && b.members.size() == 1)) {
        out.add(v, s, "zero-budget-delegation",
                "zero-budget bundle must be a self-delegated singleton");
      }
      check_parameters(b, v, s, tolerance, out);
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (cover[c] > 1) {
        out.add(v, std::nullopt, "bundles-not-disjoint",
                "bundles not disjoint: candidate " + instance.candidates[c] + " appears " +
                    std::to_string(cover[c]) + " times");
      } else if (cover[c] == 0) {
        out.add(v, std::nullopt, "partition-incomplete",
                "candidate " + instance.candidates[c] + " is in no bundle");
      }
    }
    if (std::abs(budget_sum - 1.0) > tolerance) {
      out.add(v, std::nullopt, "budget-sum",
              "budgets sum to " + format_shortest(budget_sum) + " ≠ 1");
    }
  }
  return out.take();
}

void require_shape(const ElectionInstance& instance, const SolutionMatrix& x) {
  if (x.rows() != instance.num_voters() || x.cols() != instance.num_candidates()) {
    throw DimensionError("solution is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + " but the instance has " +
                         std::to_string(instance.num_voters()) + " voters and " +
                         std::to_string(instance.num_candidates()) + " candidates");
  }
}

bool is_feasible(const ElectionInstance& instance, const SolutionMatrix& x, double tol) {
  require_shape(instance, x);
  for (double value : x.flat()) {
    if (!std::isfinite(value) || value < -tol || value > 1.0 + tol) {
      return false;
    }
  }
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    const auto row = x.row(v);
    if (std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) > tol) {
      return false;
    }
    for (const Bundle& b : instance.voters[v].bundles) {
      if (std::abs(slice_sum(x, v, b) - b.budget) > tol) {
        return false;
      }
    }
  }
  return true;
}

std::vector<double> project_to_scaled_simplex(std::span<const double> y, double total) {
  std::vector<double> out(y.size(), 0.0);
  if (y.empty() || total <= 0.0) {
    return out;
  }
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - total) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) {
      shift = candidate;
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = std::max(0.0, y[i] - shift);
  }
  return out;
}

SolutionMatrix project_to_feasible(const ElectionInstance& instance, const SolutionMatrix& y) {
  require_shape(instance, y);
  SolutionMatrix out(y.rows(), y.cols());
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (const Bundle& b : instance.voters[v].bundles) {
      if (b.notion == Notion::kDirect) {
        out(v, b.members.front()) = b.budget;
        continue;
      }
      const auto current = slice(y, v, b);
      assign_slice(out, v, b, project_to_scaled_simplex(current, b.budget));
    }
  }
  return out;
}

}  // namespace fgld
