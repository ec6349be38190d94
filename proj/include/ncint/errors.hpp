#pragma once

#include <stdexcept>
#include <string>

namespace ncint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
public:
  explicit SingularMatrix(const std::string &what = "matrix is singular")
      : Error(what) {}
};

/// The deleted submatrix of a quasi-determinant is not invertible, i.e. the
/// quasi-determinant is not defined.
class SingularSubmatrix : public SingularMatrix {
public:
  explicit SingularSubmatrix(const std::string &what)
      : SingularMatrix(what) {}
};

/// A Hankel moment block needed to build an orthogonal polynomial is singular.
class SingularMoment : public SingularMatrix {
public:
  explicit SingularMoment(const std::string &what) : SingularMatrix(what) {}
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class OrderExceeded : public Error {
public:
  using Error::Error;
};

class DepthExceeded : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

/// Well-formed input that asks for something unsupported.
class ConfigError : public Error {
public:
  using Error::Error;
};

enum class ValidationIssue { AsymmetricWeight, InsufficientNodes, NotEvenMeasure, Malformed };

inline const char *to_string(ValidationIssue issue) {
  switch (issue) {
  case ValidationIssue::AsymmetricWeight: return "AsymmetricWeight";
  case ValidationIssue::InsufficientNodes: return "InsufficientNodes";
  case ValidationIssue::NotEvenMeasure: return "NotEvenMeasure";
  case ValidationIssue::Malformed: return "Malformed";
  }
  return "Unknown";
}

class ValidationError : public Error {
public:
  ValidationError(ValidationIssue issue, const std::string &what)
      : Error(std::string(to_string(issue)) + ": " + what), issue_(issue) {}

  ValidationIssue issue() const noexcept { return issue_; }

private:
  ValidationIssue issue_;
};

} // namespace ncint
