#pragma once

#include <stdexcept>
#include <string>

namespace dstab {

/// Caller passed something outside an operation's domain (bad prime, bad
/// role, singular curve where a smooth one is required, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact integer computation would leave the supported width.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A computation could not reach a definite answer (factoring gave up).
/// Never converted into a pass or a fail.
class IndeterminateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypothesis of the main theorem fails (e.g. some afrak value is zero).
/// Distinct from an input error: the input is well formed.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local root number requested at an odd prime of additive reduction.
class AdditiveReductionError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace dstab
