#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kkle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatches, out-of-range parameters,
/// non-finite samples, unparsable files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure produced a non-finite value.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::size_t iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace kkle
