#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nqd {

using cplx = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A curve whose parameterization degenerates (|z'(t)| ~ 0) or self-intersects.
class MalformedCurve : public Error {
 public:
  using Error::Error;
};

/// Domain description violates an invariant (bounded, overlapping components,
/// basepoint outside, inconsistent end orientation, unknown catalog name, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Membership was requested for a point within the boundary tolerance.
class AmbiguousPoint : public Error {
 public:
  AmbiguousPoint(const std::string& what, cplx point) : Error(what), point_(point) {}
  cplx point() const { return point_; }

 private:
  cplx point_;
};

/// An integrand produced a non-finite value at a quadrature node.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, cplx node) : Error(what), node_(node) {}
  cplx node() const { return node_; }

 private:
  cplx node_;
};

/// Evaluation point inside the near-boundary collar (or too close to the
/// boundary for the exterior transform).
class NearBoundary : public Error {
 public:
  NearBoundary(const std::string& what, cplx point, double distance, double collar)
      : Error(what), point_(point), distance_(distance), collar_(collar) {}
  cplx point() const { return point_; }
  double distance() const { return distance_; }
  double collar() const { return collar_; }

 private:
  cplx point_;
  double distance_;
  double collar_;
};

/// No admissible in-domain path from the basepoint to the requested point.
class PathingError : public Error {
 public:
  using Error::Error;
};

/// Roof construction produced inconsistent data (non-real periods).
class ConstructionInconsistent : public Error {
 public:
  using Error::Error;
};

/// Test function not admissible for the domain.
class Inadmissible : public Error {
 public:
  using Error::Error;
};

/// Bad configuration: empty dictionary, non-positive tolerance, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Tract width vanished at an interior radius of a lower-bound integral.
class TractPinch : public Error {
 public:
  TractPinch(const std::string& what, double radius) : Error(what), radius_(radius) {}
  double radius() const { return radius_; }

 private:
  double radius_;
};

/// Sampler data violating a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Input that could not be parsed (JSON syntax, schema violations).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace nqd
