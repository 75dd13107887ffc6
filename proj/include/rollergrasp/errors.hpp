#pragma once

#include <stdexcept>
#include <string>

namespace rollergrasp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken precondition: non-finite values, non-unit axes, mixed twist frames.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateTwist : public Error {
 public:
  DegenerateTwist() : Error("degenerate twist") {}
};

class GraspError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class KinematicJam : public Error {
 public:
  using Error::Error;
};

class InfeasibleLoads : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// Malformed scenario / table file. The message names the offending field.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  SimulationError(std::size_t step_index, const std::string& what)
      : Error("step " + std::to_string(step_index) + ": " + what), step_index_(step_index) {}

  std::size_t step_index() const { return step_index_; }

 private:
  std::size_t step_index_;
};

}  // namespace rollergrasp
