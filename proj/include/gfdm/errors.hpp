#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace gfdm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
  using Error::Error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A linear system could not be solved reliably. Carries the condition estimate
/// (infinity when the factorization broke down outright).
class SingularMatrix : public Error {
public:
  SingularMatrix(const std::string &what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

private:
  double condition_ = std::numeric_limits<double>::infinity();
};

/// The chosen frequency bins make W1 non-invertible.
class BinSelectionError : public SingularMatrix {
public:
  using SingularMatrix::SingularMatrix;
};

/// Zero-forcing equalizer hit an exactly vanishing channel coefficient.
class EqualizationSingularity : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace gfdm
