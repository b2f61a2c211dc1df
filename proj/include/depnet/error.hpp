#pragma once

#include <stdexcept>
#include <string>

namespace depnet {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / parsing problems. The CLI maps these to exit code 2.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Bad shapes, bad arguments, violated preconditions.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

}  // namespace depnet
