#pragma once

#include <stdexcept>
#include <string>

namespace brt {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite or dimensionally malformed numeric input.
class InvalidInputError : public Error {
  public:
    using Error::Error;
};

/// Rank argument outside its admissible range.
class InvalidRankError : public Error {
  public:
    using Error::Error;
};

/// Operation called in a state the protocol has already ruled out
/// (e.g. a second-step quantity requested after a first-step rejection).
class InvalidStateError : public Error {
  public:
    using Error::Error;
};

/// Rank-deficient design block; the message names the condition number.
class CollinearityError : public Error {
  public:
    using Error::Error;
};

/// Covariance matrix too singular for even a pseudo-inverse.
class DegenerateVarianceError : public Error {
  public:
    using Error::Error;
};

/// Malformed CSV input; the message names the offending row/column.
class CsvError : public Error {
  public:
    using Error::Error;
};

/// Invalid command-line invocation.
class UsageError : public Error {
  public:
    using Error::Error;
};

}  // namespace brt
