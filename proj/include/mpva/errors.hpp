#pragma once

#include <stdexcept>
#include <string>

namespace mpva {

// Reading a series coefficient hidden behind the truncation marker.
struct TruncationAmbiguity : std::runtime_error {
  explicit TruncationAmbiguity(const std::string& w) : std::runtime_error(w) {}
};

// Composing series that extend infinitely in opposite directions.
struct DirectionMismatch : std::runtime_error {
  explicit DirectionMismatch(const std::string& w) : std::runtime_error(w) {}
};

// Ore / skew-field arithmetic failures.
struct OreFailure : std::runtime_error {
  explicit OreFailure(const std::string& w) : std::runtime_error(w) {}
};

// A purely local operation was asked of a table with a rational entry.
struct RationalEntry : std::runtime_error {
  explicit RationalEntry(const std::string& w) : std::runtime_error(w) {}
};

// A sandwich kernel r(S) that is not skewadjoint (r(S^-1) != -r(S)).
struct SkewViolation : std::runtime_error {
  explicit SkewViolation(const std::string& w) : std::runtime_error(w) {}
};

// A bracket application whose rational part did not cancel to a polynomial.
struct NonlocalResult : std::runtime_error {
  explicit NonlocalResult(const std::string& w) : std::runtime_error(w) {}
};

struct SingularConstraintMatrix : std::runtime_error {
  explicit SingularConstraintMatrix(const std::string& w)
      : std::runtime_error(w) {}
};

}  // namespace mpva
