#pragma once

#include <stdexcept>
#include <string>

namespace gtm {

/// Bad arguments: non-prime base, out-of-range symbol, zero difference, empty word.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bounded witness search ran out of candidates.
class ConstructionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructed occurrence did not evaluate to the requested word.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Results contradict a property the library relies on (e.g. a word with no
/// occurrence below the constructive cap).
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gtm
