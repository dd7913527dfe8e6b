#pragma once

#include <stdexcept>
#include <string>

namespace rncurves {

// Failure taxonomy used by the CLI exit-code contract: InputError-derived
// types map to exit code 2, NumericError-derived types to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateCurve : InputError {
  explicit DegenerateCurve(const std::string& msg) : InputError("DegenerateCurve: " + msg) {}
};

struct OrderTooLarge : InputError {
  explicit OrderTooLarge(const std::string& msg) : InputError("OrderTooLarge: " + msg) {}
};

struct RatioOutOfRange : InputError {
  explicit RatioOutOfRange(const std::string& msg) : InputError("RatioOutOfRange: " + msg) {}
};

struct NotRealBranchPoints : InputError {
  explicit NotRealBranchPoints(const std::string& msg) : InputError("NotRealBranchPoints: " + msg) {}
};

struct ComplexBranchPoints : InputError {
  explicit ComplexBranchPoints(const std::string& msg) : InputError("ComplexBranchPoints: " + msg) {}
};

struct PathTooCloseToBranchPoint : NumericError {
  explicit PathTooCloseToBranchPoint(const std::string& msg)
      : NumericError("PathTooCloseToBranchPoint: " + msg) {}
};

struct NoConvergence : NumericError {
  explicit NoConvergence(const std::string& msg) : NumericError("NoConvergence: " + msg) {}
};

struct SingularNormalizationSystem : NumericError {
  explicit SingularNormalizationSystem(const std::string& msg)
      : NumericError("SingularNormalizationSystem: " + msg) {}
};

struct QuadratureFailure : NumericError {
  explicit QuadratureFailure(const std::string& msg) : NumericError("QuadratureFailure: " + msg) {}
};

struct ODEFailure : NumericError {
  explicit ODEFailure(const std::string& msg) : NumericError("ODEFailure: " + msg) {}
};

struct EdgeCountMismatch : NumericError {
  explicit EdgeCountMismatch(const std::string& msg) : NumericError("EdgeCountMismatch: " + msg) {}
};

struct FitIllConditioned : NumericError {
  explicit FitIllConditioned(const std::string& msg) : NumericError("FitIllConditioned: " + msg) {}
};

struct NoSolutionInBracket : NumericError {
  explicit NoSolutionInBracket(const std::string& msg) : NumericError("NoSolutionInBracket: " + msg) {}
};

struct MultipleSignChanges : NumericError {
  explicit MultipleSignChanges(const std::string& msg) : NumericError("MultipleSignChanges: " + msg) {}
};

struct RankDeficientConstraint : NumericError {
  explicit RankDeficientConstraint(const std::string& msg)
      : NumericError("RankDeficientConstraint: " + msg) {}
};

}  // namespace rncurves
