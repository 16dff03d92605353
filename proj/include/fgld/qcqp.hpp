#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fgld/model.hpp"

namespace fgld {

/// Polynomial constraint system describing exact solutions of an instance,
/// written as SMT-LIB style s-expressions (see docs/constraint-format.md).
struct ConstraintExport {
  std::string text;

  // Number of asserts of each family.
  std::size_t bounds = 0;          // 0 <= x <= 1, one per variable
  std::size_t row_sums = 0;        // one per voter
  std::size_t bundle_sums = 0;     // one per bundle
  std::size_t bilinear = 0;        // EP ratio equalities, one per ordered pair
  std::size_t combination = 0;     // WCC equalities, one per member
  std::size_t implications = 0;    // EP-TI, two per bundle

  std::size_t nonlinear() const { return bilinear + combination + implications; }
};

/// Variable name for x(voter, candidate).
std::string variable_name(std::size_t voter, std::size_t candidate);

/// Throws UnsupportedNotionError when an EP-T bundle is present and
/// InvalidInstanceError for invalid instances.
ConstraintExport export_qcqp(const ElectionInstance& instance);

struct ConstraintCheck {
  std::size_t asserts = 0;
  std::vector<std::string> failures;  // the failing assert forms

  bool ok() const { return failures.empty(); }
};

/// Parses an exported system and evaluates every assert with x substituted.
/// Comparisons hold within `tolerance`; the premise of an implication is
/// evaluated exactly so that only the branch it selects is checked.
/// Throws Error on text outside the export grammar.
ConstraintCheck check_constraints(std::string_view text, const SolutionMatrix& x,
                                  double tolerance);

}  // namespace fgld
