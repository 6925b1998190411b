#pragma once

#include <map>
#include <vector>

#include "teleport/linalg.hpp"

namespace teleport {

// How a general-linear group element is realized from its generator T:
// Exact uses g = I+T with a true inverse, FirstOrder replaces g^{-1} by I-T
// (error O(||T||^2)).
enum class ActionMode { Exact, FirstOrder };

enum class LossKind { SquaredError, CrossEntropy };

// LeakyReLU network weights. weights[m] maps layer m (1-based in the math,
// 0-based in the vector) with shape d_m x d_{m-1}. The top layer is linear
// unless linear_top is cleared. augment_ones appends a constant-one row to
// each layer input, folding biases into the weights.
struct MlpParams {
  std::vector<Mat> weights;
  double slope = 0.1;
  bool linear_top = true;
  bool augment_ones = false;

  int layer_count() const { return static_cast<int>(weights.size()); }
  void validate() const;
};

// h[0] = X, h[m] = sigma(W_m h[m-1]) (top layer linear when configured so).
struct Activations {
  std::vector<Mat> h;
  const Mat& output() const { return h.back(); }
};

struct GlAction {
  int layer = 2;  // pair (W_layer, W_{layer-1}); valid range [2, p]
  Mat t;          // generator, d_{layer-1} x d_{layer-1}
  ActionMode mode = ActionMode::Exact;
};

struct LossGrad {
  double loss = 0.0;
  std::vector<Mat> grads;
};

double leaky(double x, double slope);
double leaky_inverse(double y, double slope);

Activations forward(const MlpParams& params, const Mat& x);

LossGrad loss_grad(const MlpParams& params, const Mat& x, const Mat& y,
                   LossKind kind = LossKind::SquaredError);

// Transforms the weight pair (W_m, W_{m-1}) while keeping every layer output
// from m upward unchanged on the data behind `cached`:
//   W_m        -> W_m g^{-1}
//   W_{m-1}    -> sigma^{-1}(g sigma(W_{m-1} h_{m-2})) h_{m-2}^+
// `cached` must come from forward(params, x) for the same x. Throws
// DegenerateActivationError when h_{m-2} loses column rank.
MlpParams gl_act(const MlpParams& params, const GlAction& action, const Activations& cached);

// --- multi-pair machinery used by the teleportation engine ---

// Anchor-state cache: activations, pseudoinverses and the subset of layer
// pairs whose h_{m-2} passes the rank check (the rest are skipped).
struct GlAnchor {
  Activations acts;
  std::map<int, Mat> pinv;        // m -> h_{m-2}^+
  std::vector<int> pairs;         // usable m values, ascending
  std::vector<std::string> skipped;  // warnings for rejected pairs
};

GlAnchor make_gl_anchor(const MlpParams& params, const Mat& x, const std::vector<int>& wanted_pairs);

struct GlApplyResult {
  MlpParams params;
  // per pair (same order as anchor.pairs): intermediates for the pullback
  std::vector<Mat> p;      // (I+T_m) sigma(W_{m-1} h_{m-2})
  std::vector<Mat> what;   // W_m after the (m+1)-pair rewrite, before g_m^{-1}
  std::vector<Mat> ginv;   // (I+T_m)^{-1} in Exact mode
};

// Applies the actions of all anchor pairs at generators ts (ascending pair
// order), equivalent to sequential application in descending m.
GlApplyResult gl_apply_all(const MlpParams& params, const GlAnchor& anchor,
                           const std::vector<Mat>& ts, ActionMode mode);

// Gradient of sum_k <v_k, W~_k> with respect to each generator, i.e. the
// adjoint of the T -> transformed-weights map at the point `applied`.
std::vector<Mat> gl_pullback(const std::vector<Mat>& v, const GlAnchor& anchor,
                             const std::vector<Mat>& ts, ActionMode mode,
                             const GlApplyResult& applied);

// Flattened parameter vector helpers.
Vec pack_weights(const MlpParams& params);
void unpack_weights(const Vec& w, MlpParams& params);

}  // namespace teleport
