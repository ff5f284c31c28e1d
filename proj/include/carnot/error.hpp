#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

enum class ErrorKind {
  InvalidArgument,
  // algebra
  JacobiViolation,
  NotGraded,
  NotStratified,
  AntisymmetryViolation,
  UnknownName,
  AlgebraMismatch,
  // group / poly
  GroupMismatch,
  NonpositiveLambda,
  ArityMismatch,
  // diffop
  BadWord,
  NotSymmetric,
  NotElliptic,
  // taylor
  InconsistentData,
  RankDeficiency,
  EvaluationFailure,
  // approximator
  CharacteristicPoint,
  BadGraph,
  OffTriangular,
  SingularSystem,
  FreeKeyInvalid,
  // verify
  DegenerateSample,
  EmptyShell,
  NoTangentBall,
  NonInterior,
  StuckPath,
  NotFound,
  // expressions and files
  ParseError,
  NotPolynomial,
  FormatError,
};

std::string_view error_name(ErrorKind kind);

/// Every failure the toolkit reports. `kind()` is stable and is what the CLI
/// prints; the message carries the offending context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& context)
      : std::runtime_error(std::string(error_name(kind)) + ": " + context), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace carnot
