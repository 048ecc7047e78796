#pragma once

#include <stdexcept>
#include <string>

namespace outage {

// Malformed or inconsistent input (bad feeder file, unknown ids, cycles, ...).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration grew past its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A placement target that cannot be met.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two scalar hypotheses share mean, variance and prior.
class Indistinguishable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace outage
