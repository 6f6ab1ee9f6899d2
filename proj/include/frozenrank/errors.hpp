#pragma once

#include <stdexcept>
#include <string>

namespace frozenrank {

// Caller passed arguments that violate an operation's precondition.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap would be exceeded.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something that the mathematics rules out happened anyway.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace frozenrank
