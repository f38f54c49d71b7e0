#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linksim/net/dataset.hpp"
#include "linksim/net/model.hpp"

namespace linksim::net {

struct TrainSchedule {
    int batch_size = 128;
    int max_epochs = 15;
    double lr0 = 3e-3;
    int lr_halving_period = 3; // epochs between halvings
    std::uint64_t seed = 1;    // shuffling
};

// 1-based: epochs 1..3 run at lr0, 4..6 at lr0/2, ...
double lr_at_epoch(const TrainSchedule& sched, int epoch);

struct TrainResult {
    std::vector<double> epoch_loss; // mean per-bit loss
    bool diverged = false;
    std::string diagnostic;
};

// Mini-batch Adam training of the sigmoid-head model with the fused
// sigmoid+BCE loss. On a non-finite loss the parameters are restored to the
// end of the previous epoch and training stops with a diagnostic.
TrainResult train(DemodNetModel& model, const Dataset& data, const TrainSchedule& sched);

// Linear-head baseline: same loop, MSE against ExactLLR targets computed
// from each sample's received symbols under the AWGN assumption at that
// sample's sigma2 (deliberately also on non-AWGN data).
TrainResult train_llrnet(DemodNetModel& model, const Dataset& data, const TrainSchedule& sched);

} // namespace linksim::net
