#pragma once

#include <stdexcept>
#include <string>

namespace d1u {

/// Argument outside the mathematical domain of an operation (d < 2, composite q, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Element or function does not match the shape of its group.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds a size cap of the library (e.g. field order above 2^20).
class CapacityError : public std::length_error {
public:
  using std::length_error::length_error;
};

/// Input object violates a semantic precondition (e.g. a base function that is not d1u).
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace d1u
