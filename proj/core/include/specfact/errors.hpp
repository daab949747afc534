#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specfact {

enum class ErrorKind {
  BandOverflow,
  InvalidArgument,
  NotHermitian,
  NotPositiveSemidefinite,
  DegenerateDensity,
  CompletionRankDeficiency,
  GramNotConstant,
  PinSingular,
  StageResidual,
  RefinementExhausted,
  CannotNormalize,
  EquivalenceUndetermined,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so
/// callers (the CLI in particular) can map it onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace specfact
