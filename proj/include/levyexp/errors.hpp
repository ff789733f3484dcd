#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace levyexp {

/// Broad classes used by the CLI to pick an exit code.
enum class ErrorClass { validation, numerical, usage };

class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorClass cls, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)), class_(cls) {}

  const std::string& kind() const noexcept { return kind_; }
  ErrorClass error_class() const noexcept { return class_; }

 private:
  std::string kind_;
  ErrorClass class_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error("domain", ErrorClass::validation, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error("precondition", ErrorClass::validation, what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what)
      : Error("invalid_model", ErrorClass::validation, what) {}
};

class AssumptionError : public Error {
 public:
  explicit AssumptionError(const std::string& what)
      : Error("assumption", ErrorClass::validation, what) {}
};

/// Evaluation at (or within the guard band of) a pole.
class PoleError : public Error {
 public:
  PoleError(std::complex<double> location, int multiplicity, const std::string& what)
      : Error("pole", ErrorClass::numerical, what),
        location_(location),
        multiplicity_(multiplicity) {}

  std::complex<double> location() const noexcept { return location_; }
  int multiplicity() const noexcept { return multiplicity_; }

 private:
  std::complex<double> location_;
  int multiplicity_;
};

class MultipleRootError : public Error {
 public:
  explicit MultipleRootError(const std::string& what)
      : Error("multiple_root", ErrorClass::numerical, what) {}
};

class CountLawError : public Error {
 public:
  explicit CountLawError(const std::string& what)
      : Error("count_law", ErrorClass::numerical, what) {}
};

class StripError : public Error {
 public:
  explicit StripError(const std::string& what)
      : Error("strip", ErrorClass::validation, what) {}
};

class MomentError : public Error {
 public:
  explicit MomentError(const std::string& what)
      : Error("moment_does_not_exist", ErrorClass::validation, what) {}
};

class SeriesError : public Error {
 public:
  SeriesError(std::string kind, const std::string& what)
      : Error(std::move(kind), ErrorClass::numerical, what) {}
};

class BreakpointError : public Error {
 public:
  explicit BreakpointError(const std::string& what)
      : Error("breakpoint", ErrorClass::numerical, what) {}
};

class InfinitePriceError : public Error {
 public:
  explicit InfinitePriceError(const std::string& what)
      : Error("infinite_price", ErrorClass::validation, what) {}
};

/// Bad command line, unreadable input file or malformed JSON.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("usage", ErrorClass::usage, what) {}
};

}  // namespace levyexp
