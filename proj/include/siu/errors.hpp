#ifndef SIU_ERRORS_HPP
#define SIU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace siu {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (bad JSON, bad CSV); message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input that violates the record schema (shape mismatch,
// missing field, broken ordering). Message names the offending field.
struct SchemaError : Error {
  using Error::Error;
};

// A numeric value outside its admissible range, e.g. a probability > 1.
struct RangeError : Error {
  using Error::Error;
};

// Invalid configuration or parameter (lambda outside [0,1], T <= 0, ...).
struct ConfigError : Error {
  using Error::Error;
};

// Filesystem failure.
struct IoError : Error {
  using Error::Error;
};

// Caller handed an empty/mismatched/non-finite data set.
struct InputError : Error {
  using Error::Error;
};

// Input that makes the requested computation ill-posed (all-equal x for a
// curve fit, fully tied vectors for a rank correlation).
struct DegenerateInputError : Error {
  using Error::Error;
};

}  // namespace siu

#endif  // SIU_ERRORS_HPP
