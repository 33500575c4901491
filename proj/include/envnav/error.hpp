#pragma once

#include <stdexcept>
#include <string>

namespace envnav {

// Base for every error raised by the library. Contract violations on pure
// functions use std::invalid_argument directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace envnav
