#pragma once

#include <stdexcept>
#include <string>

namespace oplab {

// Base class for every recoverable input/usage error. The CLI maps all of
// these to exit code 2; suite violations are recorded in reports, never
// thrown.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched specs, grids, or non-square inputs where squareness is required.
struct ShapeError : Error {
  using Error::Error;
};

// Block/coordinate index outside the valid range.
struct RangeError : Error {
  using Error::Error;
};

// Non-finite coordinates, bad exponents, malformed values.
struct InvalidInputError : Error {
  using Error::Error;
};

// Solver configuration outside its documented ranges.
struct ConfigError : Error {
  using Error::Error;
};

// Enumeration would exceed the documented size bounds.
struct SizeLimitError : Error {
  using Error::Error;
};

// Operation called with a domain exponent it does not handle.
struct DispatchError : Error {
  using Error::Error;
};

// Unparseable space strings, JSON documents, or CLI values.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace oplab
