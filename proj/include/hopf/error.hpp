#pragma once

#include <stdexcept>
#include <string>

namespace hopf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the sampled box, or inverse projection of the pole.
class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class NotAFrame : public Error {
 public:
  using Error::Error;
};

/// Antipodal input to a stereographic tangent chart.
class ChartSingularity : public Error {
 public:
  using Error::Error;
};

/// A preimage Jacobian is (nearly) degenerate; retry with a jittered value.
class NearCriticalValue : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient transverse Jacobian along a traced fiber.
class NonRegularTarget : public Error {
 public:
  using Error::Error;
};

class AmbiguousWinding : public Error {
 public:
  using Error::Error;
};

class CurvesNotDisjoint : public Error {
 public:
  using Error::Error;
};

class SelfIntersection : public Error {
 public:
  using Error::Error;
};

class DegenerateProjection : public Error {
 public:
  using Error::Error;
};

class OpenCurve : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace hopf
