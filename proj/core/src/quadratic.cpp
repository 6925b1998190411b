#include "teleport/quadratic.hpp"

#include <cmath>
#include <stdexcept>

namespace teleport {

QuadForm::QuadForm(Mat a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("QuadForm: matrix not square");
  if (!a_.all_finite()) throw std::invalid_argument("QuadForm: non-finite entries");
  double asym = 0.0;
  for (int i = 0; i < a_.rows(); ++i)
    for (int j = 0; j < a_.cols(); ++j) asym = std::max(asym, std::fabs(a_(i, j) - a_(j, i)));
  if (asym > 1e-10 * (1.0 + max_abs(a_)))
    throw std::invalid_argument("QuadForm: matrix not symmetric");

  eig_ = jacobi_eigh(a_);
  if (eig_.values.front() <= 0.0)
    throw std::invalid_argument("QuadForm: matrix not positive definite");

  const int n = a_.rows();
  Mat sqrt_d(n, n), inv_sqrt_d(n, n);
  for (int i = 0; i < n; ++i) {
    sqrt_d(i, i) = std::sqrt(eig_.values[i]);
    inv_sqrt_d(i, i) = 1.0 / sqrt_d(i, i);
  }
  const Mat vt = transpose(eig_.vectors);
  sqrt_a_ = eig_.vectors * (sqrt_d * vt);
  inv_sqrt_a_ = eig_.vectors * (inv_sqrt_d * vt);
}

std::pair<double, Vec> eval_grad(const QuadForm& q, const Vec& w) {
  if (static_cast<int>(w.size()) != q.dim())
    throw std::invalid_argument("eval_grad: dimension mismatch");
  const Vec aw = matvec(q.a(), w);
  return {dot(w, aw), scaled(aw, 2.0)};
}

Vec act(const QuadForm& q, const Mat& g, const Vec& w) {
  if (g.rows() != q.dim() || g.cols() != q.dim())
    throw std::invalid_argument("act: group element has wrong shape");
  const Mat gtg = transpose(g) * g;
  if (max_abs_diff(gtg, Mat::identity(q.dim())) > 1e-10)
    throw std::invalid_argument("act: group element not orthogonal");
  return matvec(q.inv_sqrt_a(), matvec(g, matvec(q.sqrt_a(), w)));
}

Vec optimal_teleport(const QuadForm& q, const Vec& w) {
  const auto [c, grad0] = eval_grad(q, w);
  if (c <= 0.0) throw std::invalid_argument("optimal_teleport: already at the minimum");

  const SymEig& eig = q.eig();
  const int n = q.dim();
  const double lmax = eig.values.back();

  // Basis of the top eigenspace (handles degenerate lambda_max).
  std::vector<int> top;
  for (int j = n - 1; j >= 0; --j) {
    if (eig.values[j] >= lmax * (1.0 - 1e-9)) top.push_back(j);
  }

  // Project w onto the eigenspace; if the projection vanishes, fall back to
  // the single top eigenvector with a deterministic sign.
  Vec dir(n, 0.0);
  for (int j : top) {
    const Vec v = eig.vectors.col(j);
    axpy(dot(v, w), v, dir);
  }
  double dn = norm(dir);
  if (dn < 1e-12 * norm(w)) {
    dir = eig.vectors.col(top.front());
    dn = 1.0;
  }
  dir = scaled(dir, 1.0 / dn);

  // Sign: nonnegative inner product with w, ties toward a positive leading
  // nonzero coordinate.
  double ip = dot(dir, w);
  if (ip < 0.0) {
    dir = scaled(dir, -1.0);
  } else if (ip == 0.0) {
    for (double x : dir) {
      if (x != 0.0) {
        if (x < 0.0) dir = scaled(dir, -1.0);
        break;
      }
    }
  }
  return scaled(dir, std::sqrt(c / lmax));
}

}  // namespace teleport
