#include "teleport/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace teleport {

Vec LossModel::ascent_gradient(const Vec& w, const Vec& g) const {
  const double h = fd_step();
  Vec out(g.size(), 0.0);
  Vec probe = g;
  for (size_t k = 0; k < g.size(); ++k) {
    probe[k] = g[k] + h;
    const double up = grad_norm_sq(apply_group(w, probe));
    probe[k] = g[k] - h;
    const double down = grad_norm_sq(apply_group(w, probe));
    probe[k] = g[k];
    out[k] = (up - down) / (2.0 * h);
  }
  return out;
}

Vec QuadModel::apply_group(const Vec& w, const Vec& g) const {
  const int n = q_.dim();
  Mat skew(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      skew(i, j) = g[idx];
      skew(j, i) = -g[idx];
      ++idx;
    }
  }
  const Mat rho = expm(skew);
  return matvec(q_.inv_sqrt_a(), matvec(rho, matvec(q_.sqrt_a(), w)));
}

MlpModel::MlpModel(MlpParams shape, Mat x, Mat y, MlpModelOptions opts)
    : shape_(std::move(shape)), x_(std::move(x)), y_(std::move(y)), opts_(std::move(opts)) {
  shape_.validate();
  if (opts_.pairs.empty()) {
    for (int m = 2; m <= shape_.layer_count(); ++m) opts_.pairs.push_back(m);
  }
  std::sort(opts_.pairs.begin(), opts_.pairs.end());
  for (int m : opts_.pairs) {
    if (m < 2 || m > shape_.layer_count())
      throw std::invalid_argument("MlpModel: teleportable layer index out of range");
    const int d = shape_.weights[m - 1].cols();
    pair_dims_.push_back(d);
    group_dim_ += d * d;
  }
}

int MlpModel::dim() const {
  size_t total = 0;
  for (const Mat& w : shape_.weights) total += static_cast<size_t>(w.rows()) * w.cols();
  return static_cast<int>(total);
}

int MlpModel::group_dim() const { return group_dim_; }

double MlpModel::loss(const Vec& w) const {
  MlpParams p = shape_;
  unpack_weights(w, p);
  return loss_grad(p, x_, y_, opts_.loss_kind).loss;
}

Vec MlpModel::gradient(const Vec& w) const {
  MlpParams p = shape_;
  unpack_weights(w, p);
  LossGrad lg = loss_grad(p, x_, y_, opts_.loss_kind);
  MlpParams holder = shape_;
  holder.weights = std::move(lg.grads);
  return pack_weights(holder);
}

const MlpModel::Anchor& MlpModel::ensure_anchor(const Vec& w) const {
  if (!anchor_ || anchor_->w != w) {
    MlpParams p = shape_;
    unpack_weights(w, p);
    Anchor a;
    a.w = w;
    a.gl = make_gl_anchor(p, x_, opts_.pairs);
    for (const auto& msg : a.gl.skipped) warnings_.push_back(msg);
    anchor_ = std::move(a);
  }
  return *anchor_;
}

std::vector<Mat> MlpModel::unflatten_generators(const Vec& g) const {
  // Slices follow the full wanted-pair layout; inactive pairs are dropped.
  const Anchor& a = *anchor_;
  std::vector<Mat> ts;
  size_t off = 0;
  size_t active = 0;
  for (size_t k = 0; k < opts_.pairs.size(); ++k) {
    const int d = pair_dims_[k];
    const bool is_active = active < a.gl.pairs.size() && a.gl.pairs[active] == opts_.pairs[k];
    if (is_active) {
      Mat t(d, d);
      std::copy(g.begin() + off, g.begin() + off + static_cast<size_t>(d) * d, t.data());
      ts.push_back(std::move(t));
      ++active;
    }
    off += static_cast<size_t>(d) * d;
  }
  return ts;
}

Vec MlpModel::flatten_generators(const std::vector<Mat>& ts) const {
  const Anchor& a = *anchor_;
  Vec out(group_dim_, 0.0);
  size_t off = 0;
  size_t active = 0;
  for (size_t k = 0; k < opts_.pairs.size(); ++k) {
    const int d = pair_dims_[k];
    const bool is_active = active < a.gl.pairs.size() && a.gl.pairs[active] == opts_.pairs[k];
    if (is_active) {
      const Mat& t = ts[active];
      std::copy(t.data(), t.data() + static_cast<size_t>(d) * d, out.begin() + off);
      ++active;
    }
    off += static_cast<size_t>(d) * d;
  }
  return out;
}

Vec MlpModel::apply_group(const Vec& w, const Vec& g) const {
  if (static_cast<int>(g.size()) != group_dim_)
    throw std::invalid_argument("apply_group: group coordinate size mismatch");
  const Anchor& a = ensure_anchor(w);
  MlpParams p = shape_;
  unpack_weights(w, p);
  GlApplyResult res = gl_apply_all(p, a.gl, unflatten_generators(g), opts_.mode);
  return pack_weights(res.params);
}

Vec MlpModel::ascent_gradient(const Vec& w, const Vec& g) const {
  if (opts_.grad_path == AscentGradPath::EntrywiseFd) {
    return LossModel::ascent_gradient(w, g);
  }
  // Pull 2 H grad back through the action's Jacobian: one gradient plus a
  // directional difference of gradients replaces 2 |T| objective probes.
  const Anchor& a = ensure_anchor(w);
  MlpParams p = shape_;
  unpack_weights(w, p);
  const std::vector<Mat> ts = unflatten_generators(g);
  GlApplyResult applied = gl_apply_all(p, a.gl, ts, opts_.mode);
  const Vec wprime = pack_weights(applied.params);

  const Vec u = gradient(wprime);
  const double un = norm(u);
  if (un == 0.0) return Vec(group_dim_, 0.0);
  const double eps = 1e-6 * (1.0 + norm(wprime)) / un;

  Vec plus = wprime, minus = wprime;
  axpy(eps, u, plus);
  axpy(-eps, u, minus);
  const Vec gp = gradient(plus);
  const Vec gm = gradient(minus);
  Vec v(gp.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = (gp[i] - gm[i]) / eps;

  MlpParams vholder = shape_;
  unpack_weights(v, vholder);
  const std::vector<Mat> dts = gl_pullback(vholder.weights, a.gl, ts, opts_.mode, applied);
  return flatten_generators(dts);
}

std::vector<std::string> MlpModel::take_warnings() const {
  std::vector<std::string> out;
  out.swap(warnings_);
  return out;
}

}  // namespace teleport
