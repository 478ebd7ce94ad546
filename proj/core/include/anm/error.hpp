#pragma once

#include <stdexcept>
#include <string>

namespace anm {

/// Raised when an argument or a data structure violates a documented contract.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the persistence layer. `kind()` tells callers which diagnostic
/// applies so they can react (e.g. refuse to overwrite a newer catalogue).
class FormatError : public std::runtime_error {
public:
  enum class Kind { io, corrupt, version, incomplete, schema };

  FormatError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

}  // namespace anm
