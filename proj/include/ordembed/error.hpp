#pragma once

#include <stdexcept>
#include <string>

namespace ordembed {

/// Input or invariant violation. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two distances compare equal where a strict order is required.
class TieError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File system or stream failure. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ordembed
