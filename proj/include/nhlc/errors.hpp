#pragma once

#include <stdexcept>
#include <string>

namespace nhlc {

/// Base class for failures that come from the numbers rather than the caller.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public NumericalError {
 public:
  explicit NotHermitian(const std::string& what) : NumericalError("NotHermitian: " + what) {}
};

class NotFullRank : public NumericalError {
 public:
  explicit NotFullRank(const std::string& what) : NumericalError("NotFullRank: " + what) {}
};

class NotPositiveDefinite : public NumericalError {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : NumericalError("NotPositiveDefinite: " + what) {}
};

class SingularMatrix : public NumericalError {
 public:
  explicit SingularMatrix(const std::string& what) : NumericalError("SingularMatrix: " + what) {}
};

/// γ ≥ g: the metric is no longer positive definite (exceptional point or beyond).
class PTBroken : public NumericalError {
 public:
  explicit PTBroken(const std::string& what) : NumericalError("PTBroken: " + what) {}
};

/// The conditional trajectory has (numerically) zero probability.
class VanishingTrajectory : public NumericalError {
 public:
  explicit VanishingTrajectory(const std::string& what)
      : NumericalError("VanishingTrajectory: " + what) {}
};

/// ⟨η⟩ = Tr[ρη] fell below the divergence floor.
class MetricDivergence : public NumericalError {
 public:
  explicit MetricDivergence(const std::string& what)
      : NumericalError("MetricDivergence: " + what) {}
};

class OperatorNormExceedsOne : public NumericalError {
 public:
  explicit OperatorNormExceedsOne(const std::string& what)
      : NumericalError("OperatorNormExceedsOne: " + what) {}
};

class PositivityFailure : public NumericalError {
 public:
  explicit PositivityFailure(const std::string& what)
      : NumericalError("PositivityFailure: " + what) {}
};

/// Dimensions or subsystem labels that do not fit together.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument("ShapeError: " + what) {}
};

class TooManyParts : public std::invalid_argument {
 public:
  explicit TooManyParts(const std::string& what) : std::invalid_argument("TooManyParts: " + what) {}
};

}  // namespace nhlc
