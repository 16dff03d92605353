#include "fgld/errors.hpp"

namespace fgld {

namespace {

std::string summarize(const ValidationReport& report) {
  std::string text = "invalid instance";
  for (const auto& v : report.violations) {
    text += "\n  [" + v.rule + "] " + v.message;
  }
  return text;
}

}  // namespace

InvalidInstanceError::InvalidInstanceError(ValidationReport report)
    : Error(summarize(report)), report_(std::move(report)) {}

void require_valid(const ElectionInstance& instance) {
  auto report = validate_instance(instance);
  if (!report.ok()) {
    throw InvalidInstanceError(std::move(report));
  }
}

}  // namespace fgld
