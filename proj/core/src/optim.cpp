#include "teleport/optim.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace teleport {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Vec step(OptimizerState& state, const Vec& w, const Vec& grad) {
  if (w.size() != grad.size()) throw std::invalid_argument("step: shape mismatch");
  Vec out = w;
  if (state.kind == OptKind::AdaGrad) {
    if (state.accum.size() != w.size()) state.accum.assign(w.size(), 0.0);
    for (size_t i = 0; i < w.size(); ++i) {
      state.accum[i] += grad[i] * grad[i];
      out[i] -= state.lr * grad[i] / (std::sqrt(state.accum[i]) + state.eps);
    }
  } else {
    for (size_t i = 0; i < w.size(); ++i) out[i] -= state.lr * grad[i];
  }
  return out;
}

std::vector<TrajectoryRecord> train(const LossModel& model, Vec w0, OptimizerState& opt,
                                    const std::optional<TeleportConfig>& tcfg, int t_max,
                                    Rng& rng, std::vector<TeleportReport>* reports,
                                    Vec* final_w) {
  if (t_max < 1) throw std::invalid_argument("train: t_max must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<TrajectoryRecord> records;
  records.reserve(t_max);
  Vec w = std::move(w0);
  for (int t = 0; t < t_max; ++t) {
    bool teleported = false;
    if (tcfg && tcfg->schedule.count(t)) {
      TeleportReport rep;
      w = teleport(model, w, *tcfg, rng, &rep);
      if (opt.kind == OptKind::AdaGrad && opt.reset_accum_at_teleport)
        opt.accum.assign(opt.accum.size(), 0.0);
      if (reports) reports->push_back(std::move(rep));
      teleported = true;
    }
    const double loss = model.loss(w);
    const Vec grad = model.gradient(w);
    records.push_back({t, loss, norm_sq(grad), seconds_since(t0), teleported});
    if (!std::isfinite(loss)) break;  // divergence: marker is the final record
    w = step(opt, w, grad);
  }
  if (final_w) *final_w = std::move(w);
  return records;
}

std::vector<TrajectoryRecord> train_sgd(const BatchModelFn& make_model, const Mat& x,
                                        const Mat& y, int batch_size, Vec w0,
                                        OptimizerState& opt,
                                        const std::optional<TeleportConfig>& tcfg, int t_max,
                                        Rng& rng, std::vector<TeleportReport>* reports,
                                        Vec* final_w) {
  if (t_max < 1) throw std::invalid_argument("train_sgd: t_max must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("train_sgd: batch_size must be >= 1");
  const int n = x.cols();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<TrajectoryRecord> records;
  records.reserve(t_max);
  Vec w = std::move(w0);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int t = 0; t < t_max; ++t) {
    rng.shuffle(order);
    std::vector<Minibatch> batches;
    for (int start = 0; start < n; start += batch_size) {
      const int end = std::min(n, start + batch_size);
      std::vector<int> idx(order.begin() + start, order.begin() + end);
      batches.push_back({gather_cols(x, idx), gather_cols(y, idx)});
    }

    const bool tele_epoch = tcfg && tcfg->schedule.count(t) && tcfg->batches > 0;
    if (tele_epoch) {
      w = teleport_sgd_epoch(make_model, std::move(w), *tcfg, batches, opt, rng, reports);
    } else {
      for (const Minibatch& b : batches) {
        auto model = make_model(b.x, b.y);
        w = step(opt, w, model->gradient(w));
      }
    }

    auto full = make_model(x, y);
    const double loss = full->loss(w);
    records.push_back({t, loss, full->grad_norm_sq(w), seconds_since(t0), tele_epoch});
    if (!std::isfinite(loss)) break;
  }
  if (final_w) *final_w = std::move(w);
  return records;
}

ConvergenceResult run_to_convergence(const LossModel& model, Vec w0, OptimizerState opt,
                                     const std::optional<TeleportConfig>& tcfg, Rng& rng,
                                     int max_steps, double tol) {
  const auto t0 = std::chrono::steady_clock::now();
  Vec w = std::move(w0);
  double prev = model.loss(w);
  for (int t = 0; t < max_steps; ++t) {
    if (tcfg && tcfg->schedule.count(t)) w = teleport(model, w, *tcfg, rng);
    const Vec grad = model.gradient(w);
    w = step(opt, w, grad);
    const double loss = model.loss(w);
    if (!std::isfinite(loss)) return {RunStatus::Diverged, t + 1, seconds_since(t0), loss};
    if (std::fabs(prev - loss) < tol)
      return {RunStatus::Converged, t + 1, seconds_since(t0), loss};
    prev = loss;
  }
  return {RunStatus::MaxSteps, max_steps, seconds_since(t0), prev};
}

}  // namespace teleport
