#include "teleport/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace teleport {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Vec& a) { return dot(a, a); }
double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

void axpy(double alpha, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec scaled(const Vec& x, double alpha) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = alpha * x[i];
  return r;
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

Mat::Mat(int rows, int cols, std::initializer_list<double> vals) : Mat(rows, cols) {
  if (static_cast<size_t>(rows) * cols != vals.size())
    throw std::invalid_argument("Mat: initializer size mismatch");
  std::copy(vals.begin(), vals.end(), data_.begin());
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::from_column(const Vec& v) {
  Mat m(static_cast<int>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) m(static_cast<int>(i), 0) = v[i];
  return m;
}

Mat Mat::from_row(const Vec& v) {
  Mat m(1, static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) m(0, static_cast<int>(i)) = v[i];
  return m;
}

bool Mat::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

Vec Mat::col(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Mat::row(int i) const {
  Vec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

void Mat::set_col(int j, const Vec& v) {
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  Mat c(a.rows(), b.cols());
  const int n = a.rows(), k = a.cols(), m = b.cols();
  for (int i = 0; i < n; ++i) {
    double* ci = c.data() + static_cast<size_t>(i) * m;
    for (int p = 0; p < k; ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      const double* bp = b.data() + static_cast<size_t>(p) * m;
      for (int j = 0; j < m; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mat add: shape mismatch");
  Mat c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mat sub: shape mismatch");
  Mat c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Mat operator*(double s, const Mat& a) {
  Mat c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Mat hadamard(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("hadamard: shape mismatch");
  Mat c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * b(i, j);
  return c;
}

Vec matvec(const Mat& a, const Vec& x) {
  if (a.cols() != static_cast<int>(x.size())) throw std::invalid_argument("matvec: shape mismatch");
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double frob_norm_sq(const Mat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return s;
}

double frob_norm(const Mat& a) { return std::sqrt(frob_norm_sq(a)); }

double max_abs(const Mat& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(a(i, j)));
  return m;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(a(i, j) - b(i, j)));
  return m;
}

Mat gather_cols(const Mat& a, const std::vector<int>& idx) {
  Mat out(a.rows(), static_cast<int>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j)
    for (int i = 0; i < a.rows(); ++i) out(i, static_cast<int>(j)) = a(i, idx[j]);
  return out;
}

namespace {

// In-place LU factorization with partial pivoting; perm holds row order.
void lu_factor(Mat& a, std::vector<int>& perm) {
  const int n = a.rows();
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::fabs(a(i, k)) > best) {
        best = std::fabs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) throw SingularMatrixError("lu_solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const double lik = a(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
}

Vec lu_apply(const Mat& lu, const std::vector<int>& perm, const Vec& b) {
  const int n = lu.rows();
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

}  // namespace

Vec lu_solve(Mat a, Vec b) {
  if (a.rows() != a.cols() || a.rows() != static_cast<int>(b.size()))
    throw std::invalid_argument("lu_solve: shape mismatch");
  std::vector<int> perm;
  lu_factor(a, perm);
  return lu_apply(a, perm, b);
}

Mat lu_solve(Mat a, Mat b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw std::invalid_argument("lu_solve: shape mismatch");
  std::vector<int> perm;
  lu_factor(a, perm);
  Mat x(b.rows(), b.cols());
  for (int j = 0; j < b.cols(); ++j) x.set_col(j, lu_apply(a, perm, b.col(j)));
  return x;
}

Mat inverse(const Mat& a) { return lu_solve(a, Mat::identity(a.rows())); }

namespace {

double largest_col_norm(const Mat& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j) best = std::max(best, norm(m.col(j)));
  return best;
}

// Column-pivoted Householder QR pseudoinverse for the rank-deficient path.
// m P = Q R with numerical rank r; pinv = P R1^T (R1 R1^T)^{-1} Q1^T.
Mat pinv_rank_revealing(const Mat& m, double pivot_tol) {
  const int rows = m.rows(), cols = m.cols();
  Mat r = m;
  Mat q = Mat::identity(rows);
  std::vector<int> piv(cols);
  for (int j = 0; j < cols; ++j) piv[j] = j;

  std::vector<double> colnorm2(cols, 0.0);
  for (int j = 0; j < cols; ++j) colnorm2[j] = norm_sq(r.col(j));

  const int kmax = std::min(rows, cols);
  int rank = 0;
  for (int k = 0; k < kmax; ++k) {
    // pivot: remaining column with largest trailing norm
    int best = k;
    double bestval = -1.0;
    for (int j = k; j < cols; ++j) {
      double s = 0.0;
      for (int i = k; i < rows; ++i) s += r(i, j) * r(i, j);
      if (s > bestval) {
        bestval = s;
        best = j;
      }
    }
    if (std::sqrt(bestval) <= pivot_tol) break;
    if (best != k) {
      for (int i = 0; i < rows; ++i) std::swap(r(i, k), r(i, best));
      std::swap(piv[k], piv[best]);
    }
    // Householder reflector for column k
    double alpha = 0.0;
    for (int i = k; i < rows; ++i) alpha += r(i, k) * r(i, k);
    alpha = std::sqrt(alpha);
    if (r(k, k) > 0) alpha = -alpha;
    Vec v(rows, 0.0);
    v[k] = r(k, k) - alpha;
    for (int i = k + 1; i < rows; ++i) v[i] = r(i, k);
    double vnorm2 = 0.0;
    for (int i = k; i < rows; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 > 0.0) {
      const double beta = 2.0 / vnorm2;
      for (int j = k; j < cols; ++j) {
        double s = 0.0;
        for (int i = k; i < rows; ++i) s += v[i] * r(i, j);
        s *= beta;
        for (int i = k; i < rows; ++i) r(i, j) -= s * v[i];
      }
      for (int j = 0; j < rows; ++j) {
        double s = 0.0;
        for (int i = k; i < rows; ++i) s += v[i] * q(i, j);
        s *= beta;
        for (int i = k; i < rows; ++i) q(i, j) -= s * v[i];
      }
    }
    r(k, k) = alpha;
    for (int i = k + 1; i < rows; ++i) r(i, k) = 0.0;
    ++rank;
  }
  if (rank == 0) return Mat(cols, rows);  // zero matrix pinv is zero

  // R1: rank x cols (upper-trapezoidal), Q1^T: rank x rows (rows of q)
  Mat r1(rank, cols);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < cols; ++j) r1(i, j) = r(i, j);
  Mat q1t(rank, rows);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rows; ++j) q1t(i, j) = q(i, j);

  Mat rrt = r1 * transpose(r1);
  Mat y = lu_solve(rrt, q1t);       // (R1 R1^T)^{-1} Q1^T, rank x rows
  Mat pinv_p = transpose(r1) * y;   // cols x rows, in pivoted order
  Mat out(cols, rows);
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < rows; ++j) out(piv[i], j) = pinv_p(i, j);
  return out;
}

}  // namespace

Mat pseudoinverse(const Mat& m) {
  if (m.rows() < 1 || m.cols() < 1) throw std::invalid_argument("pseudoinverse: empty matrix");
  if (!m.all_finite()) throw std::invalid_argument("pseudoinverse: non-finite input");
  // Wide inputs reduce to the tall case.
  if (m.rows() < m.cols()) return transpose(pseudoinverse(transpose(m)));

  const double tol = 1e-10 * largest_col_norm(m);
  // Cheap path: Gram solve when the Cholesky pivots say full column rank.
  Mat gram = transpose(m) * m;
  const int n = gram.rows();
  bool spd = true;
  {
    Mat l(n, n);
    for (int j = 0; j < n && spd; ++j) {
      double d = gram(j, j);
      for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
      if (d <= tol * tol) {
        spd = false;
        break;
      }
      l(j, j) = std::sqrt(d);
      for (int i = j + 1; i < n; ++i) {
        double s = gram(i, j);
        for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
        l(i, j) = s / l(j, j);
      }
    }
  }
  if (spd) {
    Mat result = lu_solve(gram, transpose(m));
    if (!result.all_finite()) throw std::invalid_argument("pseudoinverse: non-finite result");
    return result;
  }
  Mat result = pinv_rank_revealing(m, tol);
  if (!result.all_finite()) throw std::invalid_argument("pseudoinverse: non-finite result");
  return result;
}

EigPair top_eigenpair(const Mat& a, double tol, int max_iter) {
  if (a.rows() != a.cols()) throw std::invalid_argument("top_eigenpair: matrix not square");
  if (!a.all_finite()) throw std::invalid_argument("top_eigenpair: non-finite input");
  const int n = a.rows();
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) asym = std::max(asym, std::fabs(a(i, j) - a(j, i)));
  if (asym > 1e-10) throw std::invalid_argument("top_eigenpair: matrix not symmetric");

  Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  double residual = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec av = matvec(a, v);
    lambda = dot(v, av);
    Vec r = av;
    axpy(-lambda, v, r);
    residual = norm(r);
    if (residual <= tol) return {lambda, v};
    const double avn = norm(av);
    if (avn == 0.0) return {0.0, v};  // in the null space: eigenpair exactly
    v = scaled(av, 1.0 / avn);
  }
  throw ConvergenceError("top_eigenpair: power iteration did not converge", residual);
}

SymEig jacobi_eigh(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("jacobi_eigh: matrix not square");
  const int n = a.rows();
  Mat d = a;
  Mat v = Mat::identity(n);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += d(i, j) * d(i, j);
    if (std::sqrt(off) < 1e-14 * (1.0 + frob_norm(a))) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (d(p, q) == 0.0) continue;
        const double theta = (d(q, q) - d(p, p)) / (2.0 * d(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double dkp = d(k, p), dkq = d(k, q);
          d(k, p) = c * dkp - s * dkq;
          d(k, q) = s * dkp + c * dkq;
        }
        for (int k = 0; k < n; ++k) {
          const double dpk = d(p, k), dqk = d(q, k);
          d(p, k) = c * dpk - s * dqk;
          d(q, k) = s * dpk + c * dqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  SymEig out;
  out.values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d(i, i) < d(j, j); });
  out.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = d(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Mat expm(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix not square");
  const int n = a.rows();
  double rowsum = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::fabs(a(i, j));
    rowsum = std::max(rowsum, s);
  }
  int squarings = 0;
  double scale = 1.0;
  while (rowsum * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  Mat x = scale * a;
  Mat term = Mat::identity(n);
  Mat sum = Mat::identity(n);
  for (int k = 1; k <= 24; ++k) {
    term = (1.0 / k) * (term * x);
    sum = sum + term;
    if (max_abs(term) < 1e-18) break;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

Mat orthonormal_completion(const Vec& v) {
  const int n = static_cast<int>(v.size());
  const double vn = norm(v);
  if (vn == 0.0) throw std::invalid_argument("orthonormal_completion: zero vector");
  Mat q(n, n);
  q.set_col(0, scaled(v, 1.0 / vn));
  int filled = 1;
  for (int e = 0; e < n && filled < n; ++e) {
    Vec c(n, 0.0);
    c[e] = 1.0;
    for (int j = 0; j < filled; ++j) {
      const Vec qj = q.col(j);
      axpy(-dot(qj, c), qj, c);
    }
    const double cn = norm(c);
    if (cn > 1e-8) {
      q.set_col(filled, scaled(c, 1.0 / cn));
      ++filled;
    }
  }
  if (filled != n) throw std::runtime_error("orthonormal_completion: failed to complete basis");
  return q;
}

}  // namespace teleport
