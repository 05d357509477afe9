#pragma once

#include <stdexcept>

namespace cspack {

/// Malformed input text or data violating a type invariant.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cspack
