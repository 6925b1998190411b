#pragma once

#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "teleport/model.hpp"
#include "teleport/rng.hpp"

namespace teleport {

enum class GroupInit { Zero, UniformPi };

struct TeleportConfig {
  std::set<int> schedule;          // epochs at which to teleport (K)
  int ascent_steps = 10;
  double ascent_lr = 0.1;
  int batches = 0;                 // minibatches used per teleport epoch (B)
  ActionMode mode = ActionMode::Exact;
  GroupInit init = GroupInit::Zero;

  void validate() const;
};

struct TeleportReport {
  double loss_before = 0.0;
  double loss_after = 0.0;
  double grad_norm_sq_before = 0.0;
  double grad_norm_sq_after = 0.0;
  std::vector<double> ascent_trace;  // objective value per ascent step
  bool reverted = false;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

// One teleportation: gradient ascent on the group coordinates of
// ||grad L(g . w)||^2, followed by a revert-to-input safeguard so the
// returned point never has a smaller gradient norm than w.
Vec teleport(const LossModel& model, const Vec& w, const TeleportConfig& cfg, Rng& rng,
             TeleportReport* report = nullptr);

struct Minibatch {
  Mat x;
  Mat y;
};

using BatchModelFn = std::function<std::unique_ptr<LossModel>(const Mat& x, const Mat& y)>;

struct OptimizerState;  // optim.hpp

// One teleport-enabled SGD epoch: for each of the first B minibatches,
// teleport against that batch's loss and then take the SGD step on the same
// batch; remaining batches get plain steps.
Vec teleport_sgd_epoch(const BatchModelFn& make_model, Vec w, const TeleportConfig& cfg,
                       std::span<const Minibatch> batches, OptimizerState& opt, Rng& rng,
                       std::vector<TeleportReport>* reports = nullptr);

// Bookkeeping for actions that also transform the input data: the data-side
// parts compose left-to-right into a single function applied at inference.
class DataTransformLedger {
 public:
  using DataFn = std::function<Mat(const Mat&)>;

  void push(DataFn fn) { entries_.push_back(std::move(fn)); }
  size_t size() const { return entries_.size(); }

  Mat apply(const Mat& x) const {
    Mat out = x;
    for (const auto& fn : entries_) out = fn(out);
    return out;
  }

 private:
  std::vector<DataFn> entries_;
};

struct DataTeleportResult {
  Vec w;
  Mat x;
  DataTransformLedger ledger;
};

// Teleportation with a data-transform hook. The group actions implemented
// here leave the data fixed, so the ledger records an identity entry per
// teleport and x is returned unchanged.
DataTeleportResult teleport_with_data(const LossModel& model, const Vec& w, const Mat& x,
                                      const TeleportConfig& cfg, Rng& rng,
                                      DataTransformLedger ledger,
                                      TeleportReport* report = nullptr);

}  // namespace teleport
