#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fgld/counterexamples.hpp"
#include "fgld/errors.hpp"
#include "fgld/model.hpp"
#include "fgld/solvers.hpp"

namespace fgld::io {

inline constexpr int kSchemaVersion = 1;

/// Malformed input text. `line` and `column` are 1-based and zero when the
/// problem is structural rather than lexical; `path` then names the field.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             std::string path);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& path() const { return path_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string path_;
};

/// Instance JSON. Numbers are strings holding a decimal ("0.25") or a
/// fraction ("10/7"); plain JSON numbers are accepted too. Unknown fields are
/// rejected. Throws ParseError or InvalidInstanceError.
ElectionInstance parse_instance(std::string_view text);

/// Writes every number as its shortest round-trip decimal string.
std::string serialize_instance(const ElectionInstance& instance);

/// Solution JSON: voter and candidate orderings plus row-major values. Rows
/// and columns are matched to the instance by id.
SolutionMatrix parse_solution(std::string_view text, const ElectionInstance& instance);
std::string serialize_solution(const SolutionMatrix& x, const ElectionInstance& instance);

/// Instance fields plus "witnesses" (solution matrices) and a "finding"
/// section with kind, certificate, generator parameters, seed and attempt.
SearchFinding parse_finding(std::string_view text);
std::string serialize_finding(const SearchFinding& finding);

/// "iteration,l1_residual,linf_residual" header and one row per sample.
void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace fgld::io
