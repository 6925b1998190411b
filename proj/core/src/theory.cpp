#include "teleport/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace teleport {

SpeedupVerdict speedup_condition(const Mat& jacobian, const Vec& grad, const EtaNorm& eta) {
  if (jacobian.rows() != jacobian.cols() ||
      jacobian.rows() != static_cast<int>(grad.size()))
    throw std::invalid_argument("speedup_condition: shape mismatch");
  // (J^{-1})^T grad solves J^T x = grad.
  const Vec mapped = lu_solve(transpose(jacobian), grad);
  SpeedupVerdict v;
  v.lhs = eta.norm_sq(mapped);
  v.rhs = eta.norm_sq(grad);
  v.accelerates = v.lhs > v.rhs;
  return v;
}

bool lipschitz_bound(double grad_ratio, double eta, double lipschitz, int horizon) {
  if (horizon < 0) throw std::invalid_argument("lipschitz_bound: negative horizon");
  const double el = eta * lipschitz;
  if (!(el < 1.0)) throw std::domain_error("lipschitz_bound: requires eta * L < 1");
  const double threshold = std::pow((1.0 + el) / (1.0 - el), horizon);
  return grad_ratio >= threshold;
}

double newton_alignment(const Vec& grad, const Mat& hessian) {
  if (hessian.rows() != hessian.cols() ||
      hessian.rows() != static_cast<int>(grad.size()))
    throw std::invalid_argument("newton_alignment: shape mismatch");
  double asym = 0.0;
  for (int i = 0; i < hessian.rows(); ++i)
    for (int j = 0; j < hessian.cols(); ++j)
      asym = std::max(asym, std::fabs(hessian(i, j) - hessian(j, i)));
  if (asym > 1e-10 * (1.0 + max_abs(hessian)))
    throw std::invalid_argument("newton_alignment: hessian not symmetric");
  const Vec newton = lu_solve(hessian, grad);
  const double denom = norm(grad) * norm(newton);
  if (denom == 0.0) throw std::invalid_argument("newton_alignment: zero gradient");
  return dot(grad, newton) / denom;
}

double gradient_flow_decay_mismatch(const LossModel& model, const Vec& w, double delta) {
  const double l0 = model.loss(w);
  const Vec g = model.gradient(w);
  Vec w1 = w;
  axpy(-delta, g, w1);
  const double actual = model.loss(w1) - l0;
  const double predicted = -delta * norm_sq(g);
  if (predicted == 0.0) return std::fabs(actual);
  return std::fabs(actual - predicted) / std::fabs(predicted);
}

}  // namespace teleport
