#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wpot {

// Argument errors (dimension or manifold mismatch, bad indices) are reported as
// std::invalid_argument. The types below cover the remaining failure kinds.

/// A DiscreteMeasure invariant does not hold. The message names the invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coupling whose marginals disagree with the measures it claims to couple.
class InvalidCoupling : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A recovery or limit formula was called on inputs outside its hypotheses
/// (e.g. candidate sites in non-generic position).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Instance too large for an exhaustive routine, or an iterative search gave up.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fourier deconvolution hit coefficients of the cost function that vanish.
class UnrecoverableFrequency : public std::runtime_error {
 public:
  UnrecoverableFrequency(const std::string& what, std::vector<int> frequencies)
      : std::runtime_error(what), frequencies_(std::move(frequencies)) {}

  const std::vector<int>& frequencies() const noexcept { return frequencies_; }

 private:
  std::vector<int> frequencies_;
};

}  // namespace wpot
