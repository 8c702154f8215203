#pragma once

#include <stdexcept>

namespace gof {

// Trial-level degeneracies. The calibration loop records and excludes trials
// that raise these; everything else propagates.
class DegenerateSampleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DegenerateCellError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DegenerateMomentsError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the fraction of rejected trials in a calibration run exceeds the
// configured threshold, or an iterative solver fails to converge.
class CalibrationIntegrityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gof
