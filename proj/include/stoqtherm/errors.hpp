#pragma once

#include <stdexcept>
#include <string>

namespace stoqtherm {

// Violated operation precondition (bad input, size guard, ...). CLI exit 2.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file or JSON schema. CLI exit 4.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stoqtherm
