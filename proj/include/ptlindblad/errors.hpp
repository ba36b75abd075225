#pragma once

#include <stdexcept>
#include <string>

namespace ptlindblad {

/// Base of every error raised by the library. `kind()` is the stable,
/// machine-readable name used by the CLI in its JSON error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Input validation failures (bad shapes, out-of-range parameters).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Failures of a numerical procedure on otherwise valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

struct DimensionMismatch : ValidationError {
  explicit DimensionMismatch(const std::string& w) : ValidationError("DimensionMismatch", w) {}
};
struct InvalidArgument : ValidationError {
  explicit InvalidArgument(const std::string& w) : ValidationError("InvalidArgument", w) {}
};
struct NotInvolution : ValidationError {
  explicit NotInvolution(const std::string& w) : ValidationError("NotInvolution", w) {}
};
struct NotUnitary : ValidationError {
  explicit NotUnitary(const std::string& w) : ValidationError("NotUnitary", w) {}
};
struct DissipatorNotNormalized : ValidationError {
  explicit DissipatorNotNormalized(const std::string& w)
      : ValidationError("DissipatorNotNormalized", w) {}
};
struct ParseError : ValidationError {
  explicit ParseError(const std::string& w) : ValidationError("ParseError", w) {}
};
/// Config schema violation; what() starts with the offending key path.
struct SchemaError : ValidationError {
  explicit SchemaError(const std::string& w) : ValidationError("SchemaError", w) {}
};
struct IoError : ValidationError {
  explicit IoError(const std::string& w) : ValidationError("IoError", w) {}
};

struct SectorNotInvariant : NumericalError {
  explicit SectorNotInvariant(const std::string& w) : NumericalError("SectorNotInvariant", w) {}
};
struct ConvergenceFailure : NumericalError {
  explicit ConvergenceFailure(const std::string& w) : NumericalError("ConvergenceFailure", w) {}
};
struct NoZeroMode : NumericalError {
  explicit NoZeroMode(const std::string& w) : NumericalError("NoZeroMode", w) {}
};
struct DegenerateAtEvaluationPoint : NumericalError {
  explicit DegenerateAtEvaluationPoint(const std::string& w)
      : NumericalError("DegenerateAtEvaluationPoint", w) {}
};
struct BracketInvalid : NumericalError {
  explicit BracketInvalid(const std::string& w) : NumericalError("BracketInvalid", w) {}
};

}  // namespace ptlindblad
