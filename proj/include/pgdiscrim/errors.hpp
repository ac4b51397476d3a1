#pragma once

#include <stdexcept>
#include <string>

namespace pgdiscrim {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct NotEffect : Error { using Error::Error; };
struct LabelMismatch : Error { using Error::Error; };
struct BadPartition : Error { using Error::Error; };
struct EmptyBlock : Error { using Error::Error; };
struct NotProductOutcomes : Error { using Error::Error; };
struct EigenFailure : Error { using Error::Error; };
struct ConditionUnavailable : Error { using Error::Error; };
struct SizeOverflow : Error { using Error::Error; };
struct OutcomeShapeMismatch : Error { using Error::Error; };
struct BadDefault : Error { using Error::Error; };
struct AlphabetMismatch : Error { using Error::Error; };
struct BadDistribution : Error { using Error::Error; };
struct BadArgs : Error { using Error::Error; };
struct BadAngle : Error { using Error::Error; };
struct BadWeights : Error { using Error::Error; };
struct NonUniformPrior : Error { using Error::Error; };
struct WrongShape : Error { using Error::Error; };
struct UnknownCase : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Numeric solver gave up before reaching the requested duality gap.
// Carries the best value found and the gap certified for it.
struct NoConvergence : Error {
  NoConvergence(const std::string& what, double best_value_, double gap_)
      : Error(what), best_value(best_value_), gap(gap_) {}
  double best_value;
  double gap;
};

// Structural problem in an input document, located by a path into it.
struct ParseError : Error {
  ParseError(const std::string& path_, const std::string& what)
      : Error(path_ + ": " + what), path(path_) {}
  std::string path;
};

// Document parsed but failed domain validation.
struct ValidationError : Error {
  ValidationError(const std::string& path_, const std::string& what)
      : Error(path_ + ": " + what), path(path_) {}
  std::string path;
};

}  // namespace pgdiscrim
