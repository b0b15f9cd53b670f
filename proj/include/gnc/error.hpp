#pragma once

#include <stdexcept>
#include <string>

namespace gnc {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed packet buffer or spec file.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// A linear system or peeling state contradicts itself.
class InconsistentSystem : public Error {
 public:
  explicit InconsistentSystem(const std::string& what) : Error(what) {}
};

// Invalid code parameters (rates, degree bounds, sizes).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Graph sampling failed to produce an encodable instance.
class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& what) : Error(what) {}
};

}  // namespace gnc
