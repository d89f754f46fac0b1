#pragma once

#include <stdexcept>
#include <string>

namespace gsr {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input data (sizes, files, formats). CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// The computation itself failed (degenerate model, corrupted spectrum). CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define GSR_DEFINE_ERROR(Name, Base) \
  class Name : public Base {         \
   public:                           \
    using Base::Base;                \
  };

GSR_DEFINE_ERROR(SizeMismatch, DataError)
GSR_DEFINE_ERROR(ChannelMismatch, DataError)
GSR_DEFINE_ERROR(NotDivisible, DataError)
GSR_DEFINE_ERROR(InvalidFactor, DataError)
GSR_DEFINE_ERROR(TooSmall, DataError)
GSR_DEFINE_ERROR(TooLarge, DataError)
GSR_DEFINE_ERROR(UnsupportedFormat, DataError)
GSR_DEFINE_ERROR(CorruptFile, DataError)
GSR_DEFINE_ERROR(AlphaNotSupported, DataError)
GSR_DEFINE_ERROR(IoError, DataError)
GSR_DEFINE_ERROR(NonHermitianSpectrum, NumericalError)
GSR_DEFINE_ERROR(DegenerateModel, NumericalError)

#undef GSR_DEFINE_ERROR

}  // namespace gsr
