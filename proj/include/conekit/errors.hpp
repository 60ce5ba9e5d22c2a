#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace conekit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (bad dimension, foreign face, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input is degenerate up to the rank tolerance (rank-deficient arrangement,
/// both cones subspaces, ...). Samplers catch this and redraw.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Zero or several faces accepted a point in the face-decomposition
/// projection. `candidates` lists the accepting face indices (empty when none
/// accepted).
class DegenerateProjection : public Error {
 public:
  DegenerateProjection(const std::string& what, std::vector<std::size_t> candidates)
      : Error(what), candidates_(std::move(candidates)) {}

  const std::vector<std::size_t>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::size_t> candidates_;
};

/// A redraw loop ran out of retries.
class RetryBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace conekit
