#pragma once

#include <stdexcept>
#include <string>

namespace teleport {

// Iterative routine ran out of iterations; carries the last residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Layer output lost column rank; the layer pair cannot be transformed.
class DegenerateActivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace teleport
