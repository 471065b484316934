#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace torsionlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: shapes, non-finite entries, out-of-range parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An identity the computation relies on failed numerically.
class CheckFailure : public Error {
 public:
  CheckFailure(const std::string& what, int degree, double residual)
      : Error(what + " (degree " + std::to_string(degree) + ", residual " +
              std::to_string(residual) + ")"),
        degree_(degree),
        residual_(residual) {}
  explicit CheckFailure(const std::string& what) : Error(what) {}

  int degree() const { return degree_; }
  double residual() const { return residual_; }

 private:
  int degree_ = -1;
  double residual_ = 0.0;
};

/// An eigenvalue sits on the cut circle, or a cluster touches the rest of the
/// spectrum.
class CutCollision : public Error {
 public:
  CutCollision(const std::string& what, std::vector<double> nearest)
      : Error(what), nearest_moduli_(std::move(nearest)) {}

  const std::vector<double>& nearest_moduli() const { return nearest_moduli_; }

 private:
  std::vector<double> nearest_moduli_;
};

}  // namespace torsionlab
