#pragma once

#include <stdexcept>
#include <string>

namespace gsr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file content: headers, ragged lines, bad records.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Violated precondition on an in-memory argument.
class InputError : public Error {
 public:
  using Error::Error;
};

// Statistic cannot be computed (zero variance, too few points, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace gsr
