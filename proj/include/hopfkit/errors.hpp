#pragma once

#include <stdexcept>
#include <string>

namespace hopfkit {

/// Base of every error raised by the library. `name()` is the stable
/// identifier surfaced by the CLI (e.g. "NotHopfRegion").
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Raised for invalid user input (malformed systems, bad ranges).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error("InputError", what) {}
};

/// Numeric failure in one of the analysis stages.
class NumericError : public Error {
 public:
  NumericError(std::string name, const std::string& what)
      : Error(std::move(name), what) {}
};

#define HOPFKIT_NUMERIC_ERROR(Name)                                   \
  class Name : public NumericError {                                  \
   public:                                                            \
    explicit Name(const std::string& what) : NumericError(#Name, what) {} \
  };

HOPFKIT_NUMERIC_ERROR(NonMonotoneTrace)
HOPFKIT_NUMERIC_ERROR(OutOfWindow)
HOPFKIT_NUMERIC_ERROR(NotHopfRegion)
HOPFKIT_NUMERIC_ERROR(QuadratureFailure)
HOPFKIT_NUMERIC_ERROR(RevolutionFailure)
HOPFKIT_NUMERIC_ERROR(IllConditioned)
HOPFKIT_NUMERIC_ERROR(InconclusiveFit)
HOPFKIT_NUMERIC_ERROR(MixedSigns)
HOPFKIT_NUMERIC_ERROR(DomainError)
HOPFKIT_NUMERIC_ERROR(StepFailure)
HOPFKIT_NUMERIC_ERROR(Escape)
HOPFKIT_NUMERIC_ERROR(NoReturn)

#undef HOPFKIT_NUMERIC_ERROR

}  // namespace hopfkit
