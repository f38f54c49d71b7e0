#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linksim/net/train.hpp"
#include "linksim/sim/sweep.hpp"

namespace linksim::sim {

// Master seed of every figure model. Fixed so that checkpoints are shared
// across figures (and figure reruns with different sweep seeds) instead of
// retrained.
inline constexpr std::uint64_t kTrainMaster = 0x6c6e6b5f747261ULL;

// Everything needed to train one model; the checkpoint cache key is derived
// from all of it, so a recipe change invalidates stale checkpoints.
struct TrainRecipe {
    Modulation modulation = Modulation::Bpsk;
    ChannelScenario scenario{};
    net::HeadKind head = net::HeadKind::Sigmoid;
    std::vector<double> ebn0_grid_db;
    int samples_per_ebn0 = 5000;
    int symbols_per_sample = 48;
    int hidden_channels = 16;
    net::TrainSchedule schedule{};
    std::uint64_t seed = 1; // master: dataset/init/shuffle seeds derive from it
};

// Training configuration used by the figure recipes. scale is "desk"
// (minutes) or "paper" (the published budgets).
TrainRecipe figure_train_recipe(Modulation m, const ChannelScenario& scenario,
                                net::HeadKind head, const std::string& scale,
                                std::uint64_t seed);

// Returns the checkpoint path inside model_dir, training and saving first
// if no checkpoint for this exact recipe exists yet.
std::string ensure_model(const TrainRecipe& recipe, const std::string& model_dir);

struct FigureRequest {
    std::string figure;             // fig2 | fig3 | fig4 | fig5a | fig6
    std::string scale = "desk";     // desk | paper
    std::string out_dir = "figures";
    std::string model_dir = "models";
    std::uint64_t seed = 1;
};

struct FigureResult {
    std::vector<std::string> csv_paths;
    std::string manifest_path;
};

// Trains or loads the needed models, runs the figure's sweeps, and writes
// <out_dir>/<figure>/: one BerRecord CSV per curve, auxiliary theory data
// where the figure plots a theory curve, and manifest.txt echoing every
// resolved configuration. Deterministic: identical requests write identical
// bytes. fig5b is rejected (out of scope: turbo code).
FigureResult reproduce_figure(const FigureRequest& req);

} // namespace linksim::sim
