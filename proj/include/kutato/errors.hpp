#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kutato {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed network, inconsistent arguments, broken invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation would exceed its configured memory/cell budget.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t cells) : Error(what), cells_(cells) {}
  std::size_t cells() const noexcept { return cells_; }

 private:
  std::size_t cells_;
};

// Unparseable or unreadable input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Bad learner configuration (e.g. an order that is not a permutation).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kutato
