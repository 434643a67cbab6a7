#pragma once

#include <stdexcept>
#include <string>

namespace protorecon {

/// A documented precondition on a value's state does not hold (for example a
/// hidden weight below the projection floor reaching prototype extraction).
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace protorecon
