#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cms {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied value violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A table-backed object was asked about a cylinder outside its represented
/// depths or symbol caps.
class NotRepresented : public Error {
 public:
  using Error::Error;
};

/// A semi-decidable search ran out of its caps without producing a witness.
/// Carries enough context for a partial report.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

/// Wraps a failure raised while generating term `index` of a sequence.
class GeneratorFailure : public Error {
 public:
  GeneratorFailure(std::size_t index, const std::string& what, bool exhausted = false)
      : Error("sequence term " + std::to_string(index) + ": " + what), index_(index), exhausted_(exhausted) {}

  std::size_t index() const noexcept { return index_; }
  /// The underlying failure was a SearchExhausted.
  bool exhausted() const noexcept { return exhausted_; }

 private:
  std::size_t index_;
  bool exhausted_;
};

}  // namespace cms
