#pragma once

#include <stdexcept>
#include <string>

namespace sulcdepth {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (PLY/OBJ/CSV syntax).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Structurally invalid data (non-manifold edge, bad index, non-finite
/// coordinate, inconsistent orientation). `element` is the offending
/// vertex/face/row index when known, -1 otherwise.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what, long element_index = -1)
      : Error(what), element(element_index) {}
  long element;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Operation requires a closed surface but a boundary edge exists.
class NotClosedError : public Error {
public:
  using Error::Error;
};

/// Argument outside the operation's domain (e.g. scale <= 0, alpha < 0).
class DomainError : public Error {
public:
  using Error::Error;
};

class SolverError : public Error {
public:
  using Error::Error;
};

class EigensolverError : public Error {
public:
  using Error::Error;
};

/// Inflation step moved a vertex further than the divergence guard allows.
class DivergenceError : public Error {
public:
  using Error::Error;
};

/// Shortest-path target unreachable (disconnected component).
class UnreachableError : public Error {
public:
  using Error::Error;
};

class EmptyResultError : public Error {
public:
  using Error::Error;
};

class EmptyInputError : public Error {
public:
  using Error::Error;
};

/// Statistic undefined for the given data (zero IPR, zero variance, ...).
class DegenerateError : public Error {
public:
  using Error::Error;
};

}  // namespace sulcdepth
