#pragma once

#include <stdexcept>
#include <string>

namespace orbsmooth {

// Bad or out-of-range input. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction or search could not produce the requested object
// (no δ witness, infeasible η parameters). Maps to exit code 3.
class WitnessNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent computations disagree beyond tolerance. Exit code 4.
class OracleDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point outside the region where an operation is defined
// (too close to a chart boundary, degenerate plane, vanishing warp).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace orbsmooth
