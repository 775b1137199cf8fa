#pragma once

#include <stdexcept>
#include <string>

namespace annex {

// Invalid code / profile parameters (l > N-h, non-monotone requirements, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (inverse of zero, x < 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Singular system passed to a solver.
class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed packet, trace record or layout file.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called in the wrong decoder state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A decoded value disagreed with the source packet. Always a bug.
class SoundnessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace annex
