#pragma once

#include <stdexcept>
#include <string>

namespace gjmslab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define GJMSLAB_ERROR(Name)            \
  struct Name : Error {                \
    using Error::Error;                \
  }

GJMSLAB_ERROR(DomainError);
GJMSLAB_ERROR(PoleError);
GJMSLAB_ERROR(AmbiguousPole);
GJMSLAB_ERROR(ConvergenceError);
GJMSLAB_ERROR(GridMismatch);
GJMSLAB_ERROR(NonPositiveValue);
GJMSLAB_ERROR(BracketingError);
GJMSLAB_ERROR(KernelSingularity);
GJMSLAB_ERROR(UnsupportedGamma);
GJMSLAB_ERROR(IntegerGamma);
GJMSLAB_ERROR(RangeError);
GJMSLAB_ERROR(UnimplementedCase);
GJMSLAB_ERROR(NotPolyharmonic);
GJMSLAB_ERROR(ConfigError);

#undef GJMSLAB_ERROR

}  // namespace gjmslab
