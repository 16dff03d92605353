#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgld {

/// How a voter wants their share of a bundle to follow the delegate.
enum class Notion {
  kEP,      // exact proportionality
  kEPT,     // exact proportionality with a hard confidence threshold
  kEPTI,    // exact proportionality, interpolating to the default below threshold
  kWCC,     // weighted convex combination of default and delegate
  kDirect,  // self-delegated singleton, fixed value
};

std::string to_string(Notion notion);
std::optional<Notion> notion_from_string(const std::string& name);

/// True for notions whose best response is continuous in the solution.
bool is_continuous(Notion notion);

/// One block of a voter's partition of the candidates.
struct Bundle {
  std::vector<std::size_t> members;  // candidate indices, in file order
  double budget = 0.0;
  std::size_t delegate = 0;           // voter index
  Notion notion = Notion::kDirect;
  std::optional<double> weight;       // confidence in the delegate
  std::vector<double> default_split;  // empty when absent, else |members| entries

  bool has_default() const { return !default_split.empty(); }

  /// Delegate support below which the default takes over: 1 / weight.
  /// Throws std::logic_error when the bundle carries no weight.
  double threshold() const;

  bool operator==(const Bundle&) const = default;
};

struct Voter {
  std::string id;
  std::vector<Bundle> bundles;

  bool operator==(const Voter&) const = default;
};

/// Candidates, voters and every voter's delegation bundles. Indices into
/// `candidates` and `voters` follow the order they were given in.
struct ElectionInstance {
  std::vector<std::string> candidates;
  std::vector<Voter> voters;

  std::size_t num_voters() const { return voters.size(); }
  std::size_t num_candidates() const { return candidates.size(); }

  bool operator==(const ElectionInstance&) const = default;
};

/// Dense voters x candidates matrix of support values, row-major. Used both
/// for candidate solutions and for unconstrained intermediate points.
class SolutionMatrix {
 public:
  SolutionMatrix() = default;
  SolutionMatrix(std::size_t voters, std::size_t candidates, double fill = 0.0)
      : rows_(voters), cols_(candidates), values_(voters * candidates, fill) {}
  SolutionMatrix(std::size_t voters, std::size_t candidates,
                 std::vector<double> values);

  static SolutionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t voter, std::size_t candidate) {
    return values_[voter * cols_ + candidate];
  }
  double operator()(std::size_t voter, std::size_t candidate) const {
    return values_[voter * cols_ + candidate];
  }

  std::span<double> row(std::size_t voter) {
    return {values_.data() + voter * cols_, cols_};
  }
  std::span<const double> row(std::size_t voter) const {
    return {values_.data() + voter * cols_, cols_};
  }

  const std::vector<double>& flat() const { return values_; }
  std::vector<double>& flat() { return values_; }

  bool operator==(const SolutionMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Values of `x` at the members of `bundle` in row `voter`.
std::vector<double> slice(const SolutionMatrix& x, std::size_t voter,
                          const Bundle& bundle);
double slice_sum(const SolutionMatrix& x, std::size_t voter,
                 const Bundle& bundle);
void assign_slice(SolutionMatrix& x, std::size_t voter, const Bundle& bundle,
                  std::span<const double> values);

double l1_distance(const SolutionMatrix& a, const SolutionMatrix& b);
double linf_distance(const SolutionMatrix& a, const SolutionMatrix& b);

struct Violation {
  std::optional<std::size_t> voter;
  std::optional<std::size_t> bundle;
  std::string rule;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has_rule(const std::string& rule) const;
};

inline constexpr double kDefaultValidationTolerance = 1e-9;

/// Checks partition, budget, delegation and per-notion parameter rules.
/// Violations are reported in voter then bundle order.
ValidationReport validate_instance(
    const ElectionInstance& instance,
    double tolerance = kDefaultValidationTolerance);

/// Thrown when a matrix does not have the instance's voters x candidates shape.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_shape(const ElectionInstance& instance, const SolutionMatrix& x);

/// Entries in [0,1], unit row sums and bundle budgets, all within `tol`.
bool is_feasible(const ElectionInstance& instance, const SolutionMatrix& x,
                 double tol);

/// Euclidean projection of `y` onto {z >= 0, sum z = total}.
std::vector<double> project_to_scaled_simplex(std::span<const double> y,
                                              double total);

/// Projects every bundle slice of `y` onto its budget simplex.
SolutionMatrix project_to_feasible(const ElectionInstance& instance,
                                   const SolutionMatrix& y);

}  // namespace fgld
