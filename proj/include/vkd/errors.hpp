#pragma once

#include <stdexcept>
#include <string>

namespace vkd {

// Base for all errors raised by the toolkit. CLI maps NumericalError -> exit 3,
// IoError -> exit 4.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

#define VKD_DEFINE_NUMERICAL_ERROR(Name)                                       \
    class Name : public NumericalError {                                       \
      public:                                                                  \
        explicit Name(const std::string& msg)                                  \
            : NumericalError(std::string(#Name) + ": " + msg) {}               \
    }

VKD_DEFINE_NUMERICAL_ERROR(SpecMismatch);
VKD_DEFINE_NUMERICAL_ERROR(NotFinite);
VKD_DEFINE_NUMERICAL_ERROR(NonZeroMeanRhs);
VKD_DEFINE_NUMERICAL_ERROR(NotReached);
VKD_DEFINE_NUMERICAL_ERROR(Stagnation);
VKD_DEFINE_NUMERICAL_ERROR(EndpointNotNegative);
VKD_DEFINE_NUMERICAL_ERROR(StepUnderflow);
VKD_DEFINE_NUMERICAL_ERROR(MaxIterations);
VKD_DEFINE_NUMERICAL_ERROR(ConstraintDrift);
VKD_DEFINE_NUMERICAL_ERROR(NotConverged);
VKD_DEFINE_NUMERICAL_ERROR(Diverged);
VKD_DEFINE_NUMERICAL_ERROR(LinearSolveStalled);
VKD_DEFINE_NUMERICAL_ERROR(StepFailure);
VKD_DEFINE_NUMERICAL_ERROR(UnderResolved);
VKD_DEFINE_NUMERICAL_ERROR(IncompatibleTiling);
VKD_DEFINE_NUMERICAL_ERROR(RangeExhausted);

#undef VKD_DEFINE_NUMERICAL_ERROR

class ParseError : public IoError {
  public:
    explicit ParseError(const std::string& msg) : IoError("ParseError: " + msg) {}
};

class EmptyData : public IoError {
  public:
    explicit EmptyData(const std::string& msg) : IoError("EmptyData: " + msg) {}
};

} // namespace vkd
