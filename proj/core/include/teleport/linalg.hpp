#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "teleport/errors.hpp"

namespace teleport {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double norm_sq(const Vec& a);
// y += alpha * x
void axpy(double alpha, const Vec& x, Vec& y);
Vec scaled(const Vec& x, double alpha);
bool all_finite(const Vec& v);

// Dense row-major matrix of doubles. Sizes here are desk scale (a few
// hundred at most); everything is O(n^3) direct methods.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}
  Mat(int rows, int cols, std::initializer_list<double> vals);

  static Mat identity(int n);
  static Mat from_column(const Vec& v);
  static Mat from_row(const Vec& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  bool all_finite() const;
  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  Vec col(int j) const;
  Vec row(int i) const;
  void set_col(int j, const Vec& v);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Mat transpose(const Mat& a);
Mat hadamard(const Mat& a, const Mat& b);
Vec matvec(const Mat& a, const Vec& x);

double frob_norm_sq(const Mat& a);
double frob_norm(const Mat& a);
double max_abs(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);

// Gather columns by index (minibatch views are materialized copies).
Mat gather_cols(const Mat& a, const std::vector<int>& idx);

// Solve a x = b for square a by LU with partial pivoting.
Vec lu_solve(Mat a, Vec b);
Mat lu_solve(Mat a, Mat b);
Mat inverse(const Mat& a);

struct EigPair {
  double value = 0.0;
  Vec vector;
};

// Moore-Penrose pseudoinverse. Full-column-rank inputs go through the Gram
// solve (m^T m)^{-1} m^T; anything else falls back to a column-pivoted
// Householder QR with pivot threshold 1e-10 x largest column norm.
Mat pseudoinverse(const Mat& m);

// Dominant eigenpair of a symmetric matrix by power iteration from the
// normalized all-ones vector. Residual ||A v - lambda v|| <= tol on success.
EigPair top_eigenpair(const Mat& a, double tol, int max_iter);

struct SymEig {
  Vec values;   // ascending
  Mat vectors;  // columns, orthonormal; a = V diag(values) V^T
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymEig jacobi_eigh(const Mat& a);

// exp(a) by scaling-and-squaring Taylor series; used for small generators.
Mat expm(const Mat& a);

// Orthonormal basis whose first column is v/||v|| (Gram-Schmidt completion).
Mat orthonormal_completion(const Vec& v);

}  // namespace teleport
