#pragma once

#include <optional>
#include <vector>

#include "teleport/engine.hpp"
#include "teleport/linalg.hpp"
#include "teleport/rng.hpp"

namespace teleport {

enum class OptKind { GD, SGD, AdaGrad };

struct OptimizerState {
  OptKind kind = OptKind::GD;
  double lr = 1e-3;
  double eps = 1e-10;              // AdaGrad denominator guard
  Vec accum;                       // AdaGrad per-coordinate sum of squares
  bool reset_accum_at_teleport = false;  // ablation flag; default keeps history
};

// One optimizer update; mutates AdaGrad accumulators and returns the new
// parameters.
Vec step(OptimizerState& state, const Vec& w, const Vec& grad);

struct TrajectoryRecord {
  int epoch = 0;
  double loss = 0.0;
  double grad_norm_sq = 0.0;
  double wall_time_s = 0.0;
  bool teleported = false;
};

// Full-batch training loop. Records one row per epoch with the state after
// any teleport and before the descent step. A non-finite loss aborts the run
// and the marker is the non-finite value in the final record.
std::vector<TrajectoryRecord> train(const LossModel& model, Vec w0, OptimizerState& opt,
                                    const std::optional<TeleportConfig>& tcfg, int t_max,
                                    Rng& rng, std::vector<TeleportReport>* reports = nullptr,
                                    Vec* final_w = nullptr);

// Minibatch loop with the teleport placement of the SGD variant: at epochs
// in the schedule, the first B batches each get a teleport followed by their
// SGD step. Rows hold the full-data loss measured at the end of each epoch.
std::vector<TrajectoryRecord> train_sgd(const BatchModelFn& make_model, const Mat& x,
                                        const Mat& y, int batch_size, Vec w0,
                                        OptimizerState& opt,
                                        const std::optional<TeleportConfig>& tcfg, int t_max,
                                        Rng& rng, std::vector<TeleportReport>* reports = nullptr,
                                        Vec* final_w = nullptr);

enum class RunStatus { Converged, MaxSteps, Diverged };

struct ConvergenceResult {
  RunStatus status = RunStatus::MaxSteps;
  int steps = 0;
  double seconds = 0.0;
  double final_loss = 0.0;
};

// Runs until the loss change between consecutive steps drops below tol
// (convergence), the loss stops being finite (divergence), or max_steps.
ConvergenceResult run_to_convergence(const LossModel& model, Vec w0, OptimizerState opt,
                                     const std::optional<TeleportConfig>& tcfg, Rng& rng,
                                     int max_steps = 2000, double tol = 1e-3);

}  // namespace teleport
