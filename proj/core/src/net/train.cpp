#include "linksim/net/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "linksim/llr.hpp"
#include "linksim/net/checkpoint.hpp"
#include "linksim/nn/adam.hpp"

namespace linksim::net {

double lr_at_epoch(const TrainSchedule& sched, int epoch) {
    require(epoch >= 1, "train: epoch is 1-based");
    require(sched.lr_halving_period >= 1, "train: lr_halving_period must be >= 1");
    return std::ldexp(sched.lr0, -((epoch - 1) / sched.lr_halving_period));
}

namespace {

TrainResult train_impl(DemodNetModel& model, const Dataset& data, const TrainSchedule& sched,
                       bool llr_regression) {
    require(!data.samples.empty(), "train: empty dataset");
    require(data.modulation == model.config().modulation,
            "train: dataset modulation '" + modulation_name(data.modulation) +
                "' does not match the model's '" + modulation_name(model.config().modulation) +
                "'");
    require(sched.batch_size >= 2, "train: batch_size must be >= 2 (batch statistics)");
    require(sched.max_epochs >= 1, "train: max_epochs must be >= 1");
    require(sched.lr0 > 0.0, "train: lr0 must be > 0");

    const int k = model.k();
    const int len = data.symbols_per_sample;
    const std::size_t n_bits = static_cast<std::size_t>(len) * k;
    for (const auto& s : data.samples)
        require(s.rx.size() == static_cast<std::size_t>(len) && s.bits.size() == n_bits,
                "train: ragged dataset sample");

    // Per-sample targets, precomputed once: the label bits, or the exact
    // AWGN-assumption LLRs for the regression baseline.
    const std::size_t n = data.samples.size();
    std::vector<std::vector<float>> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Dataset::Sample& s = data.samples[i];
        targets[i].resize(n_bits);
        if (llr_regression) {
            const std::vector<double> z =
                llr_sequence(s.rx, model.constellation(), s.sigma2, LlrMode::Exact);
            for (std::size_t j = 0; j < n_bits; ++j) targets[i][j] = static_cast<float>(z[j]);
        } else {
            for (std::size_t j = 0; j < n_bits; ++j) targets[i][j] = s.bits[j];
        }
    }

    nn::Adam<float> adam(model.params(), sched.lr0);
    Rng shuffle_rng(derive_seed(sched.seed, 0x5f75'ff1eULL));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto snapshot = [&model]() {
        std::ostringstream os(std::ios::binary);
        save_checkpoint(model, os);
        return os.str();
    };
    std::string last_good = snapshot();
    int last_good_epoch = 0;

    TrainResult result;
    for (int epoch = 1; epoch <= sched.max_epochs; ++epoch) {
        adam.set_lr(lr_at_epoch(sched, epoch));
        shuffle_rng.shuffle(order);

        double epoch_sum = 0.0;
        for (std::size_t start = 0; start < n; start += sched.batch_size) {
            const int bsz = static_cast<int>(std::min<std::size_t>(sched.batch_size, n - start));
            nn::Tensor3f x(bsz, 2, len);
            nn::Tensor3f y(bsz, 1, static_cast<int>(n_bits));
            for (int b = 0; b < bsz; ++b) {
                const Dataset::Sample& s = data.samples[order[start + b]];
                float* re = x.row(b, 0);
                float* im = x.row(b, 1);
                for (int l = 0; l < len; ++l) {
                    re[l] = static_cast<float>(s.rx[static_cast<std::size_t>(l)].real());
                    im[l] = static_cast<float>(s.rx[static_cast<std::size_t>(l)].imag());
                }
                const std::vector<float>& t = targets[order[start + b]];
                std::copy(t.begin(), t.end(), y.row(b, 0));
            }

            nn::Tensor3f z = model.forward(x, nn::Mode::Train);
            nn::Tensor3f grad;
            const double loss = llr_regression ? nn::mse_loss(z, y, grad)
                                               : nn::bce_with_logits(z, y, grad);
            auto restore_and_bail = [&](const std::string& what) {
                std::istringstream is(last_good, std::ios::binary);
                model = load_checkpoint(is);
                result.diverged = true;
                result.diagnostic = "training diverged (" + what + ") in epoch " +
                                    std::to_string(epoch) + "; parameters restored to end of epoch " +
                                    std::to_string(last_good_epoch);
                return result;
            };
            if (!std::isfinite(loss)) return restore_and_bail("non-finite loss");
            model.backward(grad);
            adam.step();
            // A NaN can survive the loss check (ReLU maps NaN to 0 on the
            // forward pass) yet still poison the gradients, so the
            // parameters are verified directly.
            bool finite = true;
            for (const nn::ParamView<float>& p : model.params())
                for (std::size_t i = 0; finite && i < p.n; ++i)
                    finite = std::isfinite(p.value[i]);
            if (!finite) return restore_and_bail("non-finite parameters");
            epoch_sum += loss * bsz;
        }
        result.epoch_loss.push_back(epoch_sum / static_cast<double>(n));
        last_good = snapshot();
        last_good_epoch = epoch;
    }
    return result;
}

} // namespace

TrainResult train(DemodNetModel& model, const Dataset& data, const TrainSchedule& sched) {
    require(model.config().head == HeadKind::Sigmoid,
            "train: the BCE loop needs a sigmoid-head model");
    return train_impl(model, data, sched, false);
}

TrainResult train_llrnet(DemodNetModel& model, const Dataset& data, const TrainSchedule& sched) {
    require(model.config().head == HeadKind::Linear,
            "train_llrnet: the regression baseline needs a linear-head model");
    return train_impl(model, data, sched, true);
}

} // namespace linksim::net
