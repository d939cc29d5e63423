#pragma once

#include <stdexcept>
#include <string>

namespace pulseqsdc {

// Bad arguments, malformed files and violated preconditions throw
// std::invalid_argument. Failures that come out of the numerics themselves
// (unstable step, unphysical target, failed verification) throw this.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Step size too coarse for the coupling; carries the grid size that would pass.
class StabilityError : public NumericalError {
 public:
  StabilityError(const std::string& what, std::size_t required_samples)
      : NumericalError(what), required_samples_(required_samples) {}
  std::size_t required_samples() const { return required_samples_; }

 private:
  std::size_t required_samples_;
};

}  // namespace pulseqsdc
