#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "teleport/linalg.hpp"
#include "teleport/mlp.hpp"
#include "teleport/quadratic.hpp"
#include "teleport/testfns.hpp"

namespace teleport {

// A differentiable objective together with a parameterized loss-invariant
// group action. Group coordinates are a flat vector with the identity at
// zero (up to the caveats of the left-inverse regime for networks).
class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual int dim() const = 0;
  virtual int group_dim() const = 0;
  virtual double loss(const Vec& w) const = 0;
  virtual Vec gradient(const Vec& w) const = 0;
  virtual Vec apply_group(const Vec& w, const Vec& g) const = 0;

  // Step used by the default finite-difference ascent gradient.
  virtual double fd_step() const { return 1e-6; }

  // d/dg ||grad L(g . w)||^2. The default central finite difference over
  // the group coordinates is the reference implementation; models may
  // provide a faster exact path.
  virtual Vec ascent_gradient(const Vec& w, const Vec& g) const;

  // Warnings accumulated by the last apply_group/ascent_gradient call
  // (e.g. skipped layer pairs). Cleared on read.
  virtual std::vector<std::string> take_warnings() const { return {}; }

  double grad_norm_sq(const Vec& w) const { return norm_sq(gradient(w)); }
};

// Test-function model: two parameters, one group coordinate (the angle).
class TestFnModel : public LossModel {
 public:
  explicit TestFnModel(TestFn fn) : fn_(fn) {}

  int dim() const override { return 2; }
  int group_dim() const override { return 1; }
  double loss(const Vec& w) const override { return eval(fn_, {w[0], w[1]}); }
  Vec gradient(const Vec& w) const override {
    const Point2 g = grad(fn_, {w[0], w[1]});
    return {g.x1, g.x2};
  }
  Vec apply_group(const Vec& w, const Vec& g) const override {
    const Point2 r = rotate(fn_, g[0], {w[0], w[1]});
    return {r.x1, r.x2};
  }

 private:
  TestFn fn_;
};

// Quadratic-form model; the group is parameterized by a skew-symmetric
// generator (n(n-1)/2 coordinates) exponentiated to an orthogonal matrix.
class QuadModel : public LossModel {
 public:
  explicit QuadModel(QuadForm q) : q_(std::move(q)) {}

  int dim() const override { return q_.dim(); }
  int group_dim() const override { return q_.dim() * (q_.dim() - 1) / 2; }
  double loss(const Vec& w) const override { return eval_grad(q_, w).first; }
  Vec gradient(const Vec& w) const override { return eval_grad(q_, w).second; }
  Vec apply_group(const Vec& w, const Vec& g) const override;

  const QuadForm& form() const { return q_; }

 private:
  QuadForm q_;
};

enum class AscentGradPath { EntrywiseFd, HvpPullback };

struct MlpModelOptions {
  ActionMode mode = ActionMode::FirstOrder;
  AscentGradPath grad_path = AscentGradPath::EntrywiseFd;
  std::vector<int> pairs;  // teleportable layer indices; empty = all of [2, p]
  LossKind loss_kind = LossKind::SquaredError;
};

// Network model bound to one data batch. Activations and pseudoinverses are
// cached per anchor parameter vector, so the many group evaluations of one
// teleportation reuse them.
class MlpModel : public LossModel {
 public:
  MlpModel(MlpParams shape, Mat x, Mat y, MlpModelOptions opts = {});

  int dim() const override;
  int group_dim() const override;
  double loss(const Vec& w) const override;
  Vec gradient(const Vec& w) const override;
  Vec apply_group(const Vec& w, const Vec& g) const override;
  double fd_step() const override { return 1e-5; }
  Vec ascent_gradient(const Vec& w, const Vec& g) const override;
  std::vector<std::string> take_warnings() const override;

  const MlpParams& shape() const { return shape_; }
  const Mat& x() const { return x_; }
  const Mat& y() const { return y_; }
  const MlpModelOptions& options() const { return opts_; }

 private:
  struct Anchor {
    Vec w;
    GlAnchor gl;
  };
  const Anchor& ensure_anchor(const Vec& w) const;
  std::vector<Mat> unflatten_generators(const Vec& g) const;
  Vec flatten_generators(const std::vector<Mat>& ts) const;

  MlpParams shape_;
  Mat x_, y_;
  MlpModelOptions opts_;
  std::vector<int> pair_dims_;
  int group_dim_ = 0;
  mutable std::optional<Anchor> anchor_;
  mutable std::vector<std::string> warnings_;
};

}  // namespace teleport
