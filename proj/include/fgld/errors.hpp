#pragma once

#include <stdexcept>
#include <string>

#include "fgld/model.hpp"

namespace fgld {

/// Base for every domain failure reported by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstanceError : public Error {
 public:
  explicit InvalidInstanceError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// An operation was asked to handle a notion it has no support for.
class UnsupportedNotionError : public Error {
 public:
  using Error::Error;
};

/// A request outside an operation's documented limits (grid size, tolerances).
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Throws InvalidInstanceError unless the instance validates cleanly.
void require_valid(const ElectionInstance& instance);

}  // namespace fgld
