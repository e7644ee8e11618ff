#pragma once

#include <stdexcept>
#include <string>

namespace gbtsvm {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number of the offending row.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  std::size_t line_number;
};

/// Label column does not contain exactly two distinct raw values.
struct LabelError : Error {
  using Error::Error;
};

struct EmptyDataset : Error {
  using Error::Error;
};

struct InvalidFoldCount : Error {
  using Error::Error;
};

/// A ball family (or dataset) contains only one class where two are required.
struct SingleClassFamily : Error {
  using Error::Error;
};

struct SingleClassDataset : Error {
  using Error::Error;
};

/// Score vector does not line up with the ball family it was computed from.
struct ScoreMisalignment : Error {
  using Error::Error;
};

/// Factorization breakdown in dual assembly.
struct NumericalFailure : Error {
  using Error::Error;
};

/// A trained model has a zero normal vector and cannot classify.
struct DegenerateModel : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct ShapeError : Error {
  using Error::Error;
};

}  // namespace gbtsvm
