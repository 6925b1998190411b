#include "teleport/engine.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "teleport/optim.hpp"

namespace teleport {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void TeleportConfig::validate() const {
  if (ascent_steps < 1) throw std::invalid_argument("TeleportConfig: ascent_steps must be >= 1");
  if (!(ascent_lr > 0.0)) throw std::invalid_argument("TeleportConfig: ascent_lr must be positive");
  if (batches < 0) throw std::invalid_argument("TeleportConfig: batches must be >= 0");
}

Vec teleport(const LossModel& model, const Vec& w, const TeleportConfig& cfg, Rng& rng,
             TeleportReport* report) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  TeleportReport rep;
  rep.loss_before = model.loss(w);
  rep.grad_norm_sq_before = model.grad_norm_sq(w);

  Vec g(model.group_dim(), 0.0);
  if (cfg.init == GroupInit::UniformPi) {
    for (double& gk : g) gk = rng.uniform(0.0, kPi);
  }

  rep.ascent_trace.push_back(model.grad_norm_sq(model.apply_group(w, g)));
  for (int s = 0; s < cfg.ascent_steps; ++s) {
    const Vec ag = model.ascent_gradient(w, g);
    if (!all_finite(ag)) break;
    axpy(cfg.ascent_lr, ag, g);
    rep.ascent_trace.push_back(model.grad_norm_sq(model.apply_group(w, g)));
  }

  Vec wprime = model.apply_group(w, g);
  rep.grad_norm_sq_after = all_finite(wprime) ? model.grad_norm_sq(wprime)
                                              : std::numeric_limits<double>::quiet_NaN();
  if (!(rep.grad_norm_sq_after >= rep.grad_norm_sq_before)) {
    wprime = w;  // safeguard: never leave with a smaller gradient
    rep.grad_norm_sq_after = rep.grad_norm_sq_before;
    rep.reverted = true;
  }
  rep.loss_after = model.loss(wprime);
  rep.warnings = model.take_warnings();
  rep.seconds = seconds_since(t0);
  if (report) *report = std::move(rep);
  return wprime;
}

Vec teleport_sgd_epoch(const BatchModelFn& make_model, Vec w, const TeleportConfig& cfg,
                       std::span<const Minibatch> batches, OptimizerState& opt, Rng& rng,
                       std::vector<TeleportReport>* reports) {
  cfg.validate();
  const size_t teleport_count = std::min<size_t>(cfg.batches, batches.size());
  for (size_t i = 0; i < batches.size(); ++i) {
    auto model = make_model(batches[i].x, batches[i].y);
    if (i < teleport_count) {
      TeleportReport rep;
      w = teleport(*model, w, cfg, rng, &rep);
      if (opt.kind == OptKind::AdaGrad && opt.reset_accum_at_teleport)
        opt.accum.assign(opt.accum.size(), 0.0);
      if (reports) reports->push_back(std::move(rep));
    }
    w = step(opt, w, model->gradient(w));
  }
  return w;
}

DataTeleportResult teleport_with_data(const LossModel& model, const Vec& w, const Mat& x,
                                      const TeleportConfig& cfg, Rng& rng,
                                      DataTransformLedger ledger, TeleportReport* report) {
  DataTeleportResult out;
  out.w = teleport(model, w, cfg, rng, report);
  // All group actions in this library fix the data, so the data-side factor
  // recorded for later composition is the identity.
  ledger.push([](const Mat& m) { return m; });
  out.x = x;
  out.ledger = std::move(ledger);
  return out;
}

}  // namespace teleport
