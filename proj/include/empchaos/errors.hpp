#pragma once

#include <stdexcept>
#include <string>

namespace empchaos {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input that is well-formed but carries no information (e.g. an all-zero
// trajectory matrix).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class IllConditionedBasis : public Error {
 public:
  IllConditionedBasis(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class SingularBlock : public Error {
 public:
  SingularBlock(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Raised when a time integrator produces a non-finite state.
class IntegrationDiverged : public Error {
 public:
  IntegrationDiverged(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace empchaos
