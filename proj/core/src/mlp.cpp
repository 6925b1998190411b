#include "teleport/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace teleport {

double leaky(double x, double slope) { return x >= 0.0 ? x : slope * x; }

double leaky_inverse(double y, double slope) { return y >= 0.0 ? y : y / slope; }

namespace {

Mat leaky_map(const Mat& a, double slope) {
  Mat out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = leaky(a(i, j), slope);
  return out;
}

Mat leaky_inverse_map(const Mat& a, double slope) {
  Mat out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = leaky_inverse(a(i, j), slope);
  return out;
}

// derivative of sigma from its output (sign is preserved by the map)
Mat leaky_deriv_from_output(const Mat& h, double slope) {
  Mat out(h.rows(), h.cols());
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) out(i, j) = h(i, j) >= 0.0 ? 1.0 : slope;
  return out;
}

Mat leaky_inv_deriv(const Mat& p, double slope) {
  Mat out(p.rows(), p.cols());
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) out(i, j) = p(i, j) >= 0.0 ? 1.0 : 1.0 / slope;
  return out;
}

Mat append_ones_row(const Mat& h) {
  Mat out(h.rows() + 1, h.cols());
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) out(i, j) = h(i, j);
  for (int j = 0; j < h.cols(); ++j) out(h.rows(), j) = 1.0;
  return out;
}

Mat drop_last_col(const Mat& w) {
  Mat out(w.rows(), w.cols() - 1);
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols() - 1; ++j) out(i, j) = w(i, j);
  return out;
}

}  // namespace

void MlpParams::validate() const {
  if (weights.empty()) throw std::invalid_argument("MlpParams: no layers");
  if (!(slope > 0.0 && slope <= 1.0))
    throw std::invalid_argument("MlpParams: slope must lie in (0, 1]");
  const int extra = augment_ones ? 1 : 0;
  for (size_t m = 1; m < weights.size(); ++m) {
    if (weights[m].cols() - extra != weights[m - 1].rows())
      throw std::invalid_argument("MlpParams: adjacent layer shapes incompatible");
  }
}

Activations forward(const MlpParams& params, const Mat& x) {
  params.validate();
  const int extra = params.augment_ones ? 1 : 0;
  if (params.weights.front().cols() - extra != x.rows())
    throw std::invalid_argument("forward: input row count does not match first layer");
  const int p = params.layer_count();
  Activations acts;
  acts.h.reserve(p + 1);
  acts.h.push_back(x);
  for (int m = 1; m <= p; ++m) {
    const Mat& input = acts.h.back();
    const Mat pre = params.augment_ones ? params.weights[m - 1] * append_ones_row(input)
                                        : params.weights[m - 1] * input;
    const bool linear = params.linear_top && m == p;
    acts.h.push_back(linear ? pre : leaky_map(pre, params.slope));
  }
  return acts;
}

LossGrad loss_grad(const MlpParams& params, const Mat& x, const Mat& y, LossKind kind) {
  const Activations acts = forward(params, x);
  const int p = params.layer_count();
  const Mat& out = acts.output();
  if (!out.same_shape(y)) throw std::invalid_argument("loss_grad: target shape mismatch");

  LossGrad result;
  Mat delta(out.rows(), out.cols());

  if (kind == LossKind::SquaredError) {
    double loss = 0.0;
    for (int i = 0; i < out.rows(); ++i) {
      for (int j = 0; j < out.cols(); ++j) {
        const double d = out(i, j) - y(i, j);
        loss += d * d;
        delta(i, j) = 2.0 * d;
      }
    }
    result.loss = loss;
  } else {
    if (!params.linear_top)
      throw std::invalid_argument("loss_grad: cross-entropy expects a linear top layer");
    const int n = out.cols();
    double loss = 0.0;
    for (int j = 0; j < n; ++j) {
      double zmax = out(0, j);
      for (int i = 1; i < out.rows(); ++i) zmax = std::max(zmax, out(i, j));
      double sum = 0.0;
      for (int i = 0; i < out.rows(); ++i) sum += std::exp(out(i, j) - zmax);
      const double logz = zmax + std::log(sum);
      for (int i = 0; i < out.rows(); ++i) {
        const double softmax = std::exp(out(i, j) - logz);
        delta(i, j) = (softmax - y(i, j)) / n;
        if (y(i, j) != 0.0) loss -= y(i, j) * (out(i, j) - logz);
      }
    }
    result.loss = loss / n;
  }

  result.grads.resize(p);
  for (int m = p; m >= 1; --m) {
    const bool linear = params.linear_top && m == p;
    if (!linear) delta = hadamard(delta, leaky_deriv_from_output(acts.h[m], params.slope));
    const Mat& input = acts.h[m - 1];
    result.grads[m - 1] = params.augment_ones ? delta * transpose(append_ones_row(input))
                                              : delta * transpose(input);
    if (m > 1) {
      const Mat& w = params.weights[m - 1];
      delta = params.augment_ones ? transpose(drop_last_col(w)) * delta : transpose(w) * delta;
    }
  }
  return result;
}

namespace {

// Column-rank check on h via its Gram spectrum; throws when degenerate.
Mat checked_pinv(const Mat& h, int pair_index) {
  const Mat gram = transpose(h) * h;
  const SymEig eig = jacobi_eigh(gram);
  const double scale = std::max(eig.values.back(), 1e-300);
  if (h.cols() > h.rows() || eig.values.front() <= 1e-10 * scale) {
    throw DegenerateActivationError("layer pair " + std::to_string(pair_index) +
                                    ": h_{m-2} is column-rank deficient");
  }
  return pseudoinverse(h);
}

}  // namespace

GlAnchor make_gl_anchor(const MlpParams& params, const Mat& x, const std::vector<int>& wanted_pairs) {
  if (params.augment_ones)
    throw std::invalid_argument("gl action: augmented-ones networks are not supported");
  GlAnchor anchor;
  anchor.acts = forward(params, x);
  std::vector<int> pairs = wanted_pairs;
  std::sort(pairs.begin(), pairs.end());
  for (int m : pairs) {
    if (m < 2 || m > params.layer_count())
      throw std::invalid_argument("gl action: layer index out of range");
    try {
      anchor.pinv[m] = checked_pinv(anchor.acts.h[m - 2], m);
      anchor.pairs.push_back(m);
    } catch (const DegenerateActivationError& e) {
      anchor.skipped.push_back(e.what());
    }
  }
  return anchor;
}

GlApplyResult gl_apply_all(const MlpParams& params, const GlAnchor& anchor,
                           const std::vector<Mat>& ts, ActionMode mode) {
  if (ts.size() != anchor.pairs.size())
    throw std::invalid_argument("gl_apply_all: generator count mismatch");
  GlApplyResult res;
  res.params = params;
  res.p.resize(ts.size());
  res.what.resize(ts.size());
  res.ginv.resize(ts.size());

  // Descending application; each pair sees original activations below it.
  for (int i = static_cast<int>(anchor.pairs.size()) - 1; i >= 0; --i) {
    const int m = anchor.pairs[i];
    const Mat& t = ts[i];
    const int d = params.weights[m - 1].cols();
    if (t.rows() != d || t.cols() != d)
      throw std::invalid_argument("gl_apply_all: generator shape mismatch");

    const Mat g = Mat::identity(d) + t;
    res.what[i] = res.params.weights[m - 1];  // current W_m (maybe rewritten by pair m+1)
    if (mode == ActionMode::Exact) {
      Mat ginv;
      try {
        ginv = inverse(g);
      } catch (const SingularMatrixError&) {
        throw std::invalid_argument("gl action: I+T is singular in exact mode");
      }
      res.ginv[i] = ginv;
      res.params.weights[m - 1] = res.what[i] * ginv;
    } else {
      res.params.weights[m - 1] = res.what[i] * (Mat::identity(d) - t);
    }

    const Mat& s = anchor.acts.h[m - 1];  // sigma(W_{m-1} h_{m-2}) == h_{m-1}
    res.p[i] = g * s;
    res.params.weights[m - 2] = leaky_inverse_map(res.p[i], params.slope) * anchor.pinv.at(m);
  }
  return res;
}

std::vector<Mat> gl_pullback(const std::vector<Mat>& v, const GlAnchor& anchor,
                             const std::vector<Mat>& ts, ActionMode mode,
                             const GlApplyResult& applied) {
  const auto& pairs = anchor.pairs;
  std::vector<Mat> dts(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    const int m = pairs[i];
    const Mat& vm = v[m - 1];

    // through W~_m = What_m g_m^{-1}
    Mat contrib;
    if (mode == ActionMode::Exact) {
      const Mat ginv_t = transpose(applied.ginv[i]);
      contrib = -1.0 * (ginv_t * (transpose(applied.what[i]) * vm) * ginv_t);
    } else {
      contrib = -1.0 * (transpose(applied.what[i]) * vm);
    }

    // through W~_{m-1} = sigma^{-1}(P_m) pinv [g_{m-1}^{-1}]
    Mat u = v[m - 2];
    const bool lower_also_pair = (i > 0 && pairs[i - 1] == m - 1);
    if (lower_also_pair) {
      if (mode == ActionMode::Exact) {
        u = u * transpose(applied.ginv[i - 1]);
      } else {
        const int dl = ts[i - 1].rows();
        u = u * transpose(Mat::identity(dl) - ts[i - 1]);
      }
    }
    const Mat dphidr = u * transpose(anchor.pinv.at(m));
    const Mat dphidp = hadamard(dphidr, leaky_inv_deriv(applied.p[i], applied.params.slope));
    const Mat& s = anchor.acts.h[m - 1];
    dts[i] = contrib + dphidp * transpose(s);
  }
  return dts;
}

MlpParams gl_act(const MlpParams& params, const GlAction& action, const Activations& cached) {
  if (params.augment_ones)
    throw std::invalid_argument("gl_act: augmented-ones networks are not supported");
  params.validate();
  const int m = action.layer;
  if (m < 2 || m > params.layer_count())
    throw std::invalid_argument("gl_act: layer index out of range");
  if (static_cast<int>(cached.h.size()) != params.layer_count() + 1)
    throw std::invalid_argument("gl_act: cached activations do not match network depth");

  GlAnchor anchor;
  anchor.acts = cached;
  anchor.pinv[m] = checked_pinv(cached.h[m - 2], m);  // throws when rank deficient
  anchor.pairs.push_back(m);
  GlApplyResult res = gl_apply_all(params, anchor, {action.t}, action.mode);
  return std::move(res.params);
}

Vec pack_weights(const MlpParams& params) {
  size_t total = 0;
  for (const Mat& w : params.weights) total += static_cast<size_t>(w.rows()) * w.cols();
  Vec out;
  out.reserve(total);
  for (const Mat& w : params.weights)
    out.insert(out.end(), w.data(), w.data() + static_cast<size_t>(w.rows()) * w.cols());
  return out;
}

void unpack_weights(const Vec& w, MlpParams& params) {
  size_t off = 0;
  for (Mat& wm : params.weights) {
    const size_t count = static_cast<size_t>(wm.rows()) * wm.cols();
    if (off + count > w.size()) throw std::invalid_argument("unpack_weights: vector too short");
    std::copy(w.begin() + off, w.begin() + off + count, wm.data());
    off += count;
  }
  if (off != w.size()) throw std::invalid_argument("unpack_weights: vector size mismatch");
}

}  // namespace teleport
