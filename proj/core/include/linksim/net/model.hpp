#pragma once

#include <string>
#include <vector>

#include "linksim/modem.hpp"
#include "linksim/nn/adam.hpp"
#include "linksim/nn/layers.hpp"
#include "linksim/nn/tensor.hpp"
#include "linksim/rng.hpp"
#include "linksim/types.hpp"

namespace linksim::net {

// Sigmoid head = bit-probability demodulator; Linear head = LLR regressor
// (the comparison baseline).
enum class HeadKind : std::uint8_t { Sigmoid = 0, Linear = 1 };

std::string head_name(HeadKind h);

struct ModelConfig {
    Modulation modulation = Modulation::Qpsk;
    int hidden_channels = 64; // C
    int hidden_kernel = 31;
    int n_hidden_blocks = 3;
    HeadKind head = HeadKind::Sigmoid;
};

// Fully convolutional: deconv(2->C, stride k) -> BN -> ReLU, then
// n_hidden_blocks x [conv(C->C) -> BN -> ReLU], then conv(C->1). The head
// nonlinearity is applied by the loss/inference helpers, never stored here,
// so forward() always returns the pre-head values z.
template <typename T>
class DemodNetT {
public:
    explicit DemodNetT(const ModelConfig& cfg)
        : cfg_(cfg), constellation_(build_constellation(cfg.modulation)),
          deconv_(2, cfg.hidden_channels, constellation_.k),
          bn_in_(cfg.hidden_channels),
          head_conv_(cfg.hidden_channels, 1, cfg.hidden_kernel) {
        require(cfg.hidden_channels >= 1, "demodnet: hidden_channels must be >= 1");
        require(cfg.n_hidden_blocks >= 1, "demodnet: n_hidden_blocks must be >= 1");
        require(cfg.hidden_kernel % 2 == 1, "demodnet: hidden kernel must be odd");
        convs_.reserve(cfg.n_hidden_blocks);
        bns_.reserve(cfg.n_hidden_blocks);
        for (int i = 0; i < cfg.n_hidden_blocks; ++i) {
            convs_.emplace_back(cfg.hidden_channels, cfg.hidden_channels, cfg.hidden_kernel);
            bns_.emplace_back(cfg.hidden_channels);
        }
        relus_.resize(1 + static_cast<std::size_t>(cfg.n_hidden_blocks));
    }

    void init_params(Rng& rng, double stddev = 0.05) {
        deconv_.init_gaussian(rng, stddev);
        for (auto& c : convs_) c.init_gaussian(rng, stddev);
        head_conv_.init_gaussian(rng, stddev);
    }

    // x: (batch, 2, n_symbols) -> z: (batch, 1, k * n_symbols).
    nn::Tensor3<T> forward(const nn::Tensor3<T>& x, nn::Mode mode) {
        require(x.channels == 2, "demodnet: input must have 2 channels (Re, Im), got " +
                                     std::to_string(x.channels));
        nn::Tensor3<T> h = deconv_.forward(x);
        h = bn_in_.forward(h, mode);
        h = relus_[0].forward(h);
        for (std::size_t i = 0; i < convs_.size(); ++i) {
            h = convs_[i].forward(h);
            h = bns_[i].forward(h, mode);
            h = relus_[i + 1].forward(h);
        }
        return head_conv_.forward(h);
    }

    // grad_z: gradient of the loss w.r.t. forward()'s output. Returns the
    // gradient w.r.t. the input; parameter gradients land in the layers.
    nn::Tensor3<T> backward(const nn::Tensor3<T>& grad_z) {
        nn::Tensor3<T> g = head_conv_.backward(grad_z);
        for (int i = static_cast<int>(convs_.size()) - 1; i >= 0; --i) {
            g = relus_[static_cast<std::size_t>(i) + 1].backward(g);
            g = bns_[static_cast<std::size_t>(i)].backward(g);
            g = convs_[static_cast<std::size_t>(i)].backward(g);
        }
        g = relus_[0].backward(g);
        g = bn_in_.backward(g);
        return deconv_.backward(g);
    }

    // Fixed order; the checkpoint and optimizer both rely on it.
    std::vector<nn::ParamView<T>> params() {
        std::vector<nn::ParamView<T>> out;
        auto append = [&out](std::vector<nn::ParamView<T>> v) {
            out.insert(out.end(), v.begin(), v.end());
        };
        append(deconv_.params());
        append(bn_in_.params());
        for (std::size_t i = 0; i < convs_.size(); ++i) {
            append(convs_[i].params());
            append(bns_[i].params());
        }
        append(head_conv_.params());
        return out;
    }

    std::size_t n_params() {
        std::size_t n = 0;
        for (const auto& p : params()) n += p.n;
        return n;
    }

    // Declares the BN running statistics usable as-is, allowing inference on
    // a model that has never seen a training batch (training and checkpoint
    // load do this implicitly).
    void mark_inference_ready() {
        bn_in_.mark_statistics_loaded();
        for (auto& b : bns_) b.mark_statistics_loaded();
    }

    const ModelConfig& config() const { return cfg_; }
    const Constellation& constellation() const { return constellation_; }
    int k() const { return constellation_.k; }

    nn::TransposedConv1d<T>& deconv() { return deconv_; }
    nn::BatchNorm1d<T>& bn_in() { return bn_in_; }
    std::vector<nn::Conv1d<T>>& convs() { return convs_; }
    std::vector<nn::BatchNorm1d<T>>& bns() { return bns_; }
    nn::Conv1d<T>& head_conv() { return head_conv_; }

private:
    ModelConfig cfg_;
    Constellation constellation_;
    nn::TransposedConv1d<T> deconv_;
    nn::BatchNorm1d<T> bn_in_;
    std::vector<nn::Conv1d<T>> convs_;
    std::vector<nn::BatchNorm1d<T>> bns_;
    nn::Conv1d<T> head_conv_;
    std::vector<nn::Relu<T>> relus_;
};

using DemodNetModel = DemodNetT<float>;

// Fig.-1 architecture with weights ~ N(0, 0.05^2), biases zero, BN affine
// at identity; deterministic in init_seed.
DemodNetModel build_demodnet(Modulation m, int hidden_channels, std::uint64_t init_seed,
                             HeadKind head = HeadKind::Sigmoid);

// Minimum burst the fully convolutional stack accepts (receptive-field
// floor, in symbols).
inline constexpr std::size_t kMinInputSymbols = 31;

// (batch=1, 2, n) feature tensor: channel 0 = Re, channel 1 = Im.
nn::Tensor3f features_from_symbols(const ComplexSequence& rx);

// Pre-head network output for a burst of any length >= kMinInputSymbols.
// Long bursts are evaluated in windows with a receptive-field margin, which
// reproduces whole-burst inference exactly.
std::vector<double> model_logits(DemodNetModel& model, const ComplexSequence& rx);

// Sigmoid head only: y_hat = sigmoid(z), the per-bit probability of bit 1.
std::vector<double> model_probabilities(DemodNetModel& model, const ComplexSequence& rx);

// Soft values in the LLR sign convention (positive => bit 0 more likely):
// the LPR xi = -z for the sigmoid head, the raw regression output for the
// linear head. Feeds hard decisions and the Viterbi metric like exact LLRs.
std::vector<double> model_soft_llr(DemodNetModel& model, const ComplexSequence& rx);

// xi_i = log((1 - y_i) / y_i), the probability-domain LPR.
std::vector<double> lpr_from_probabilities(const std::vector<double>& probs);

struct LayerOps {
    std::string name;
    long long mult = 0;
    long long add = 0;
    long long cmp = 0;    // ReLU comparisons
    long long explog = 0; // exp/log/division-by-exp evaluations
};

struct ComplexityReport {
    int k = 0;
    std::vector<LayerOps> layers; // per input symbol
    LayerOps total;
    LayerOps exact_llr; // analytic reference per symbol for the same modulation
};

// Exact per-input-symbol operation counts for the resolved architecture
// (dense-convolution counting convention), plus the analytic ExactLLR
// counts for the same constellation.
ComplexityReport count_ops(const DemodNetModel& model);

std::string format_ops(const ComplexityReport& report);

} // namespace linksim::net
