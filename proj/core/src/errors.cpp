#include "specfact/errors.hpp"

namespace specfact {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::BandOverflow: return "band-overflow";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NotHermitian: return "not-hermitian";
    case ErrorKind::NotPositiveSemidefinite: return "not-positive-semidefinite";
    case ErrorKind::DegenerateDensity: return "degenerate-density";
    case ErrorKind::CompletionRankDeficiency: return "completion-rank-deficiency";
    case ErrorKind::GramNotConstant: return "gram-not-constant";
    case ErrorKind::PinSingular: return "pin-singular";
    case ErrorKind::StageResidual: return "stage-residual";
    case ErrorKind::RefinementExhausted: return "refinement-exhausted";
    case ErrorKind::CannotNormalize: return "cannot-normalize";
    case ErrorKind::EquivalenceUndetermined: return "equivalence-undetermined";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace specfact
