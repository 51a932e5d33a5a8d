#pragma once

#include <stdexcept>
#include <string>

namespace vrpstw {

/// Base class for problems with the input data, as opposed to bugs.
/// The CLI maps every `Error` to exit code 2.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Instance or configuration breaks a structural invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// No solution satisfying the hard constraints exists (e.g. an order heavier than Q).
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

/// Input is larger than an exact method is allowed to enumerate.
class SizeLimitError : public Error {
  public:
    using Error::Error;
};

/// Malformed file contents.
class ParseError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace vrpstw
