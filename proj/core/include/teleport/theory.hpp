#pragma once

#include "teleport/linalg.hpp"
#include "teleport/model.hpp"

namespace teleport {

// Learning-rate weighting for the decay rate dL/dt = -||grad||^2_eta.
// Either a scalar rate or a per-coordinate diagonal (e.g. an AdaGrad
// preconditioner snapshot).
class EtaNorm {
 public:
  static EtaNorm scalar(double s) {
    EtaNorm e;
    e.scalar_ = s;
    return e;
  }
  static EtaNorm diagonal(Vec d) {
    EtaNorm e;
    e.diag_ = std::move(d);
    e.is_diag_ = true;
    return e;
  }

  bool is_diagonal() const { return is_diag_; }

  double norm_sq(const Vec& v) const {
    double s = 0.0;
    if (is_diag_) {
      for (size_t i = 0; i < v.size(); ++i) s += v[i] * diag_[i] * v[i];
    } else {
      for (double x : v) s += scalar_ * x * x;
    }
    return s;
  }

 private:
  double scalar_ = 1.0;
  Vec diag_;
  bool is_diag_ = false;
};

struct SpeedupVerdict {
  double lhs = 0.0;  // ||(J^{-1})^T grad||^2_eta at the teleported point
  double rhs = 0.0;  // ||grad||^2_eta at the original point
  bool accelerates = false;
};

// Does a (linear) action with Jacobian J increase the decay rate of the
// loss? Throws SingularMatrixError for singular J.
SpeedupVerdict speedup_condition(const Mat& jacobian, const Vec& grad, const EtaNorm& eta);

// Sufficient condition for the teleported trajectory's gradient norm to
// still dominate after `horizon` more descent steps, under a Lipschitz
// bound on the gradient norm. Requires eta * lipschitz < 1.
bool lipschitz_bound(double grad_ratio, double eta, double lipschitz, int horizon);

// Cosine between the gradient and the Newton direction H^{-1} grad.
double newton_alignment(const Vec& grad, const Mat& hessian);

// Relative mismatch between the loss change of one explicit-Euler gradient
// flow step of size delta and -delta * ||grad||^2_eta (scalar eta here).
double gradient_flow_decay_mismatch(const LossModel& model, const Vec& w, double delta);

}  // namespace teleport
