#pragma once

#include <utility>

#include "teleport/linalg.hpp"

namespace teleport {

// Convex quadratic loss w^T A w with A symmetric positive definite.
// The orthogonal group acts on level sets through conjugation by A^{1/2}:
// g . w = A^{-1/2} g A^{1/2} w, which leaves the loss unchanged.
class QuadForm {
 public:
  explicit QuadForm(Mat a);

  int dim() const { return a_.rows(); }
  const Mat& a() const { return a_; }
  const Mat& sqrt_a() const { return sqrt_a_; }
  const Mat& inv_sqrt_a() const { return inv_sqrt_a_; }
  const SymEig& eig() const { return eig_; }
  double lambda_max() const { return eig_.values.back(); }

 private:
  Mat a_;
  Mat sqrt_a_;
  Mat inv_sqrt_a_;
  SymEig eig_;
};

// (w^T A w, 2 A w)
std::pair<double, Vec> eval_grad(const QuadForm& q, const Vec& w);

// g . w for orthogonal g; rejects non-orthogonal g.
Vec act(const QuadForm& q, const Mat& g, const Vec& w);

// Closed-form destination of the level-set gradient-norm search: the point
// on the level set of w parallel to the top eigenvector of A. Satisfies
// ||grad||^2 = 4 lambda_max c and minimizes ||w'|| over the level set. For a
// degenerate top eigenvalue the projection of w onto the top eigenspace is
// rescaled to the level set.
Vec optimal_teleport(const QuadForm& q, const Vec& w);

}  // namespace teleport
