#pragma once

#include <stdexcept>
#include <string>

namespace slrr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x and y are (near-)antipodal: the log map is undefined at the cut locus.
struct AntipodalError : Error {
  using Error::Error;
};

// Tangent vectors live at different base points.
struct BaseMismatchError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct SvdFailure : Error {
  using Error::Error;
};

struct EmptyRangeError : Error {
  using Error::Error;
};

struct DegenerateAffinityError : Error {
  using Error::Error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};

struct EmptyTrainError : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

struct SeparationUnsatisfiable : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace slrr
