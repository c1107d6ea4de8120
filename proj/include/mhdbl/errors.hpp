#pragma once

#include <stdexcept>
#include <string>

namespace mhdbl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A construction parameter violates its admissible range. The message names
/// the offending parameter.
class InvalidParameter : public Error {
public:
  InvalidParameter(const std::string& name, const std::string& constraint)
      : Error("invalid parameter '" + name + "': " + constraint), name_(name) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

/// The normal grid has too few nodes for the requested stencil.
class GridTooCoarse : public Error {
public:
  using Error::Error;
};

/// Generated initial data does not satisfy the lower envelope f >= c<y>^-delta.
class EnvelopeViolation : public Error {
public:
  using Error::Error;
};

/// f dropped below the admissible floor; the good unknowns are undefined.
class PositivityLost : public Error {
public:
  PositivityLost(double t, double minRatio, double floor)
      : Error("positivity lost at t=" + std::to_string(t) + ": min f<y>^delta = " +
              std::to_string(minRatio) + " < floor " + std::to_string(floor)),
        time_(t), minRatio_(minRatio) {}

  double time() const noexcept { return time_; }
  double minRatio() const noexcept { return minRatio_; }

private:
  double time_;
  double minRatio_;
};

class CflCollapse : public Error {
public:
  using Error::Error;
};

class NonFinite : public Error {
public:
  using Error::Error;
};

class SingularSolve : public Error {
public:
  using Error::Error;
};

}  // namespace mhdbl
