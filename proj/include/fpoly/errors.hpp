#pragma once

#include <stdexcept>
#include <string>

namespace fpoly {

/// Bad input: malformed specs, violated preconditions. Maps to CLI exit 1.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric procedure could not produce a sound result. Maps to CLI exit 2.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Support vector outside the domain: facet `index` has no interior.
class EmptyFacetError : public NumericError {
public:
  EmptyFacetError(std::size_t index, const std::string& detail)
      : NumericError("EmptyFacet(" + std::to_string(index) + "): " + detail), index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

class CutoffOverflowError : public NumericError {
public:
  using NumericError::NumericError;
};

class FanMismatchError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

}  // namespace fpoly
