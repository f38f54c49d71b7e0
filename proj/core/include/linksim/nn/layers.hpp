#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "linksim/nn/tensor.hpp"
#include "linksim/rng.hpp"

namespace linksim::nn {

enum class Mode { Train, Infer };

// 1-D convolution (cross-correlation), stride 1, zero "same" padding, odd
// kernel. Weights are (out_ch, in_ch, kernel) with kernel contiguous.
// Reductions accumulate in double.
template <typename T>
class Conv1d {
public:
    Conv1d(int in_ch, int out_ch, int kernel)
        : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel),
          weights_(static_cast<std::size_t>(out_ch) * in_ch * kernel, T(0)),
          bias_(out_ch, T(0)),
          wgrad_(weights_.size(), T(0)), bgrad_(out_ch, T(0)) {
        require(kernel % 2 == 1, "conv1d: kernel length must be odd for same padding");
        require(in_ch >= 1 && out_ch >= 1, "conv1d: channel counts must be >= 1");
    }

    void init_gaussian(Rng& rng, double stddev) {
        for (T& w : weights_) w = static_cast<T>(stddev * rng.normal());
        std::fill(bias_.begin(), bias_.end(), T(0));
    }

    Tensor3<T> forward(const Tensor3<T>& x) {
        require(x.channels == in_ch_, "conv1d: input has " + std::to_string(x.channels) +
                                          " channels, layer expects " + std::to_string(in_ch_));
        cached_x_ = x;
        const int pad = (kernel_ - 1) / 2;
        const int len = x.length;
        const int padded = len + 2 * pad;
        Tensor3<T> y(x.batch, out_ch_, len);
        // Rows are widened to double once, with zeroed borders, so the MAC
        // loop runs full length with no edge tests or per-element converts.
        // Zero-padding contributes exact zero terms; per-element summation
        // order (ci, then tap) matches the naive loop.
        scratch_.assign(static_cast<std::size_t>(in_ch_) * padded, 0.0);
        std::vector<double> acc(len);
        for (int b = 0; b < x.batch; ++b) {
            for (int ci = 0; ci < in_ch_; ++ci) {
                const T* xr = x.row(b, ci);
                double* xp = scratch_.data() + static_cast<std::size_t>(ci) * padded + pad;
                for (int l = 0; l < len; ++l) xp[l] = xr[l];
            }
            for (int co = 0; co < out_ch_; ++co) {
                std::fill(acc.begin(), acc.end(), static_cast<double>(bias_[co]));
                for (int ci = 0; ci < in_ch_; ++ci) {
                    const double* xp = scratch_.data() + static_cast<std::size_t>(ci) * padded;
                    const T* wr = weight_row(co, ci);
                    for (int kk = 0; kk < kernel_; ++kk) {
                        const double w = wr[kk];
                        const double* xs = xp + kk;
                        for (int l = 0; l < len; ++l) acc[l] += w * xs[l];
                    }
                }
                T* yr = y.row(b, co);
                for (int l = 0; l < len; ++l) yr[l] = static_cast<T>(acc[l]);
            }
        }
        return y;
    }

    Tensor3<T> backward(const Tensor3<T>& g) {
        const Tensor3<T>& x = cached_x_;
        require(g.batch == x.batch && g.channels == out_ch_ && g.length == x.length,
                "conv1d backward: gradient shape " + g.shape_str() + " does not match output");
        const int pad = (kernel_ - 1) / 2;
        const int len = x.length;
        const int padded = len + 2 * pad;

        // gx[t] = sum_{co,kk} w[co][ci][kk] * g[co][t + pad - kk], i.e. a
        // full correlation with the kernel reversed; padded g rows make it
        // edge-free like the forward pass.
        Tensor3<T> gx(x.batch, in_ch_, len);
        scratch_.assign(static_cast<std::size_t>(out_ch_) * padded, 0.0);
        std::vector<double> acc(len);
        for (int b = 0; b < x.batch; ++b) {
            for (int co = 0; co < out_ch_; ++co) {
                const T* gr = g.row(b, co);
                double* gp = scratch_.data() + static_cast<std::size_t>(co) * padded + pad;
                for (int l = 0; l < len; ++l) gp[l] = gr[l];
            }
            for (int ci = 0; ci < in_ch_; ++ci) {
                std::fill(acc.begin(), acc.end(), 0.0);
                for (int co = 0; co < out_ch_; ++co) {
                    const double* gp = scratch_.data() + static_cast<std::size_t>(co) * padded;
                    const T* wr = weight_row(co, ci);
                    for (int kk = 0; kk < kernel_; ++kk) {
                        const double w = wr[kk];
                        const double* gs = gp + 2 * pad - kk;
                        for (int l = 0; l < len; ++l) acc[l] += w * gs[l];
                    }
                }
                T* gxr = gx.row(b, ci);
                for (int l = 0; l < len; ++l) gxr[l] = static_cast<T>(acc[l]);
            }
        }

        // Weight gradient: accumulate along the kernel axis so the inner loop
        // is contiguous in both x and the accumulator (the per-tap reduction
        // order over (b, l) matches the naive triple loop).
        std::vector<double> wacc(kernel_);
        for (int ci = 0; ci < in_ch_; ++ci) {
            scratch_.assign(static_cast<std::size_t>(x.batch) * padded, 0.0);
            for (int b = 0; b < x.batch; ++b) {
                const T* xr = x.row(b, ci);
                double* xp = scratch_.data() + static_cast<std::size_t>(b) * padded + pad;
                for (int l = 0; l < len; ++l) xp[l] = xr[l];
            }
            for (int co = 0; co < out_ch_; ++co) {
                std::fill(wacc.begin(), wacc.end(), 0.0);
                for (int b = 0; b < x.batch; ++b) {
                    const T* gr = g.row(b, co);
                    const double* xp = scratch_.data() + static_cast<std::size_t>(b) * padded;
                    for (int l = 0; l < len; ++l) {
                        const double gl = gr[l];
                        const double* xs = xp + l;
                        for (int kk = 0; kk < kernel_; ++kk) wacc[kk] += gl * xs[kk];
                    }
                }
                T* wg = wgrad_.data() + (static_cast<std::size_t>(co) * in_ch_ + ci) * kernel_;
                for (int kk = 0; kk < kernel_; ++kk) wg[kk] = static_cast<T>(wacc[kk]);
            }
        }
        for (int co = 0; co < out_ch_; ++co) {
            double sb = 0.0;
            for (int b = 0; b < x.batch; ++b) {
                const T* gr = g.row(b, co);
                for (int l = 0; l < len; ++l) sb += gr[l];
            }
            bgrad_[co] = static_cast<T>(sb);
        }
        return gx;
    }

    std::vector<ParamView<T>> params() {
        return {{weights_.data(), wgrad_.data(), weights_.size()},
                {bias_.data(), bgrad_.data(), bias_.size()}};
    }

    int in_channels() const { return in_ch_; }
    int out_channels() const { return out_ch_; }
    int kernel() const { return kernel_; }
    std::vector<T>& weights() { return weights_; }
    std::vector<T>& bias() { return bias_; }
    const std::vector<T>& weights() const { return weights_; }
    const std::vector<T>& bias() const { return bias_; }

private:
    const T* weight_row(int co, int ci) const {
        return weights_.data() + (static_cast<std::size_t>(co) * in_ch_ + ci) * kernel_;
    }

    int in_ch_, out_ch_, kernel_;
    std::vector<T> weights_, bias_;
    std::vector<T> wgrad_, bgrad_;
    Tensor3<T> cached_x_;
    std::vector<double> scratch_;
};

// Transposed 1-D convolution with kernel length equal to the stride
// (non-overlapping patches): output length is exactly stride * input
// length. Weights are (out_ch, in_ch, stride).
template <typename T>
class TransposedConv1d {
public:
    TransposedConv1d(int in_ch, int out_ch, int stride)
        : in_ch_(in_ch), out_ch_(out_ch), stride_(stride),
          weights_(static_cast<std::size_t>(out_ch) * in_ch * stride, T(0)),
          bias_(out_ch, T(0)),
          wgrad_(weights_.size(), T(0)), bgrad_(out_ch, T(0)) {
        require(stride >= 1, "deconv1d: stride must be >= 1");
        require(in_ch >= 1 && out_ch >= 1, "deconv1d: channel counts must be >= 1");
    }

    void init_gaussian(Rng& rng, double stddev) {
        for (T& w : weights_) w = static_cast<T>(stddev * rng.normal());
        std::fill(bias_.begin(), bias_.end(), T(0));
    }

    Tensor3<T> forward(const Tensor3<T>& x) {
        require(x.channels == in_ch_, "deconv1d: input has " + std::to_string(x.channels) +
                                          " channels, layer expects " + std::to_string(in_ch_));
        cached_x_ = x;
        Tensor3<T> y(x.batch, out_ch_, x.length * stride_);
        for (int b = 0; b < x.batch; ++b) {
            for (int co = 0; co < out_ch_; ++co) {
                T* yr = y.row(b, co);
                for (int l = 0; l < x.length; ++l) {
                    for (int t = 0; t < stride_; ++t) {
                        double s = bias_[co];
                        for (int ci = 0; ci < in_ch_; ++ci)
                            s += static_cast<double>(weight(co, ci, t)) * x.at(b, ci, l);
                        yr[l * stride_ + t] = static_cast<T>(s);
                    }
                }
            }
        }
        return y;
    }

    Tensor3<T> backward(const Tensor3<T>& g) {
        const Tensor3<T>& x = cached_x_;
        require(g.batch == x.batch && g.channels == out_ch_ && g.length == x.length * stride_,
                "deconv1d backward: gradient shape " + g.shape_str() + " does not match output");

        Tensor3<T> gx(x.batch, in_ch_, x.length);
        for (int b = 0; b < x.batch; ++b) {
            for (int ci = 0; ci < in_ch_; ++ci) {
                T* gxr = gx.row(b, ci);
                for (int l = 0; l < x.length; ++l) {
                    double s = 0.0;
                    for (int co = 0; co < out_ch_; ++co) {
                        const T* gr = g.row(b, co);
                        for (int t = 0; t < stride_; ++t)
                            s += static_cast<double>(weight(co, ci, t)) * gr[l * stride_ + t];
                    }
                    gxr[l] = static_cast<T>(s);
                }
            }
        }

        for (int co = 0; co < out_ch_; ++co) {
            for (int ci = 0; ci < in_ch_; ++ci) {
                for (int t = 0; t < stride_; ++t) {
                    double s = 0.0;
                    for (int b = 0; b < x.batch; ++b) {
                        const T* gr = g.row(b, co);
                        const T* xr = x.row(b, ci);
                        for (int l = 0; l < x.length; ++l)
                            s += gr[l * stride_ + t] * static_cast<double>(xr[l]);
                    }
                    wgrad_[(static_cast<std::size_t>(co) * in_ch_ + ci) * stride_ + t] =
                        static_cast<T>(s);
                }
            }
            double sb = 0.0;
            for (int b = 0; b < x.batch; ++b) {
                const T* gr = g.row(b, co);
                for (int l = 0; l < x.length * stride_; ++l) sb += gr[l];
            }
            bgrad_[co] = static_cast<T>(sb);
        }
        return gx;
    }

    std::vector<ParamView<T>> params() {
        return {{weights_.data(), wgrad_.data(), weights_.size()},
                {bias_.data(), bgrad_.data(), bias_.size()}};
    }

    int in_channels() const { return in_ch_; }
    int out_channels() const { return out_ch_; }
    int stride() const { return stride_; }
    std::vector<T>& weights() { return weights_; }
    std::vector<T>& bias() { return bias_; }
    const std::vector<T>& weights() const { return weights_; }
    const std::vector<T>& bias() const { return bias_; }

private:
    T weight(int co, int ci, int t) const {
        return weights_[(static_cast<std::size_t>(co) * in_ch_ + ci) * stride_ + t];
    }

    int in_ch_, out_ch_, stride_;
    std::vector<T> weights_, bias_;
    std::vector<T> wgrad_, bgrad_;
    Tensor3<T> cached_x_;
};

// Per-channel batch normalization over batch x length, eps 1e-5, running
// statistics updated with momentum 0.1 (unbiased variance, as is
// conventional for the running estimate).
template <typename T>
class BatchNorm1d {
public:
    explicit BatchNorm1d(int channels)
        : channels_(channels),
          gamma_(channels, T(1)), beta_(channels, T(0)),
          running_mean_(channels, T(0)), running_var_(channels, T(1)),
          ggrad_(channels, T(0)), bgrad_(channels, T(0)) {}

    Tensor3<T> forward(const Tensor3<T>& x, Mode mode) {
        require(x.channels == channels_, "batchnorm: input has " + std::to_string(x.channels) +
                                             " channels, layer expects " + std::to_string(channels_));
        if (mode == Mode::Infer) {
            require(batches_seen_ > 0,
                    "batchnorm: inference requested before any training step initialized the "
                    "running statistics");
            Tensor3<T> y(x.batch, channels_, x.length);
            for (int c = 0; c < channels_; ++c) {
                const double inv = 1.0 / std::sqrt(static_cast<double>(running_var_[c]) + kEps);
                const double scale = gamma_[c] * inv;
                const double shift = beta_[c] - scale * running_mean_[c];
                for (int b = 0; b < x.batch; ++b) {
                    const T* xr = x.row(b, c);
                    T* yr = y.row(b, c);
                    for (int l = 0; l < x.length; ++l)
                        yr[l] = static_cast<T>(scale * xr[l] + shift);
                }
            }
            return y;
        }

        const double n = static_cast<double>(x.batch) * x.length;
        require(n > 1, "batchnorm: training batch must contain more than one element per channel");
        mean_.assign(channels_, 0.0);
        inv_std_.assign(channels_, 0.0);
        xhat_ = Tensor3<T>(x.batch, channels_, x.length);
        Tensor3<T> y(x.batch, channels_, x.length);
        for (int c = 0; c < channels_; ++c) {
            double s = 0.0;
            for (int b = 0; b < x.batch; ++b) {
                const T* xr = x.row(b, c);
                for (int l = 0; l < x.length; ++l) s += xr[l];
            }
            const double mu = s / n;
            double sq = 0.0;
            for (int b = 0; b < x.batch; ++b) {
                const T* xr = x.row(b, c);
                for (int l = 0; l < x.length; ++l) {
                    const double d = xr[l] - mu;
                    sq += d * d;
                }
            }
            const double var = sq / n;
            const double inv = 1.0 / std::sqrt(var + kEps);
            mean_[c] = mu;
            inv_std_[c] = inv;

            const double g = gamma_[c], be = beta_[c];
            for (int b = 0; b < x.batch; ++b) {
                const T* xr = x.row(b, c);
                T* hr = xhat_.row(b, c);
                T* yr = y.row(b, c);
                for (int l = 0; l < x.length; ++l) {
                    const double h = (xr[l] - mu) * inv;
                    hr[l] = static_cast<T>(h);
                    yr[l] = static_cast<T>(g * h + be);
                }
            }

            const double var_unbiased = sq / (n - 1.0);
            running_mean_[c] = static_cast<T>((1.0 - kMomentum) * running_mean_[c] + kMomentum * mu);
            running_var_[c] =
                static_cast<T>((1.0 - kMomentum) * running_var_[c] + kMomentum * var_unbiased);
        }
        ++batches_seen_;
        return y;
    }

    // Train-mode backward; forward(Train) must have run on the same batch.
    Tensor3<T> backward(const Tensor3<T>& g) {
        require(g.same_shape(xhat_), "batchnorm backward: gradient shape " + g.shape_str() +
                                         " does not match cached batch " + xhat_.shape_str());
        const double n = static_cast<double>(g.batch) * g.length;
        Tensor3<T> gx(g.batch, channels_, g.length);
        for (int c = 0; c < channels_; ++c) {
            double sum_g = 0.0, sum_gh = 0.0;
            for (int b = 0; b < g.batch; ++b) {
                const T* gr = g.row(b, c);
                const T* hr = xhat_.row(b, c);
                for (int l = 0; l < g.length; ++l) {
                    sum_g += gr[l];
                    sum_gh += static_cast<double>(gr[l]) * hr[l];
                }
            }
            ggrad_[c] = static_cast<T>(sum_gh);
            bgrad_[c] = static_cast<T>(sum_g);

            const double scale = gamma_[c] * inv_std_[c];
            const double mg = sum_g / n;
            const double mgh = sum_gh / n;
            for (int b = 0; b < g.batch; ++b) {
                const T* gr = g.row(b, c);
                const T* hr = xhat_.row(b, c);
                T* gxr = gx.row(b, c);
                for (int l = 0; l < g.length; ++l)
                    gxr[l] = static_cast<T>(scale * (gr[l] - mg - hr[l] * mgh));
            }
        }
        return gx;
    }

    std::vector<ParamView<T>> params() {
        return {{gamma_.data(), ggrad_.data(), gamma_.size()},
                {beta_.data(), bgrad_.data(), beta_.size()}};
    }

    int channels() const { return channels_; }
    std::vector<T>& gamma() { return gamma_; }
    std::vector<T>& beta() { return beta_; }
    std::vector<T>& running_mean() { return running_mean_; }
    std::vector<T>& running_var() { return running_var_; }
    const std::vector<T>& gamma() const { return gamma_; }
    const std::vector<T>& beta() const { return beta_; }
    const std::vector<T>& running_mean() const { return running_mean_; }
    const std::vector<T>& running_var() const { return running_var_; }
    long long batches_seen() const { return batches_seen_; }
    void mark_statistics_loaded() { batches_seen_ = std::max<long long>(batches_seen_, 1); }
    void restore_batches_seen(long long n) { batches_seen_ = n; }

    static constexpr double kEps = 1e-5;
    static constexpr double kMomentum = 0.1;

private:
    int channels_;
    std::vector<T> gamma_, beta_, running_mean_, running_var_;
    std::vector<T> ggrad_, bgrad_;
    std::vector<double> mean_, inv_std_;
    Tensor3<T> xhat_;
    long long batches_seen_ = 0;
};

template <typename T>
class Relu {
public:
    Tensor3<T> forward(const Tensor3<T>& x) {
        cached_x_ = x;
        Tensor3<T> y = x;
        for (T& v : y.data) v = v > T(0) ? v : T(0);
        return y;
    }
    Tensor3<T> backward(const Tensor3<T>& g) {
        require(g.same_shape(cached_x_), "relu backward: shape mismatch " + g.shape_str());
        Tensor3<T> gx = g;
        for (std::size_t i = 0; i < gx.data.size(); ++i)
            if (!(cached_x_.data[i] > T(0))) gx.data[i] = T(0);
        return gx;
    }

private:
    Tensor3<T> cached_x_;
};

template <typename T>
inline T stable_sigmoid(T z) {
    if (z >= T(0)) {
        const T e = static_cast<T>(std::exp(-static_cast<double>(z)));
        return T(1) / (T(1) + e);
    }
    const T e = static_cast<T>(std::exp(static_cast<double>(z)));
    return e / (T(1) + e);
}

template <typename T>
class Sigmoid {
public:
    Tensor3<T> forward(const Tensor3<T>& x) {
        Tensor3<T> y = x;
        for (T& v : y.data) v = stable_sigmoid(v);
        cached_y_ = y;
        return y;
    }
    Tensor3<T> backward(const Tensor3<T>& g) {
        require(g.same_shape(cached_y_), "sigmoid backward: shape mismatch " + g.shape_str());
        Tensor3<T> gx = g;
        for (std::size_t i = 0; i < gx.data.size(); ++i) {
            const T y = cached_y_.data[i];
            gx.data[i] = g.data[i] * y * (T(1) - y);
        }
        return gx;
    }

private:
    Tensor3<T> cached_y_;
};

// Binary cross entropy on probabilities, clamped to [1e-7, 1-1e-7]; mean
// over all bits in the batch. Value only — training uses the fused logits
// form below.
template <typename T>
double bce_loss(const Tensor3<T>& probs, const Tensor3<T>& labels) {
    require(probs.same_shape(labels), "bce_loss: probs " + probs.shape_str() +
                                          " vs labels " + labels.shape_str());
    constexpr double lo = 1e-7, hi = 1.0 - 1e-7;
    double total = 0.0;
    for (std::size_t i = 0; i < probs.data.size(); ++i) {
        const double y = labels.data[i];
        require(y == 0.0 || y == 1.0, "bce_loss: labels must be 0 or 1");
        const double p = std::clamp(static_cast<double>(probs.data[i]), lo, hi);
        total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
    return total / static_cast<double>(probs.data.size());
}

// Fused sigmoid + BCE evaluated on logits: numerically stable value and the
// exact gradient d/dz = (sigmoid(z) - y) / n. Per-bit normalization keeps the
// reported loss comparable across sample lengths (chance level is ln 2); Adam
// cancels the constant factor, so dynamics match the summed form.
template <typename T>
double bce_with_logits(const Tensor3<T>& logits, const Tensor3<T>& labels, Tensor3<T>& grad_out) {
    require(logits.same_shape(labels), "bce_with_logits: logits " + logits.shape_str() +
                                           " vs labels " + labels.shape_str());
    grad_out = Tensor3<T>(logits.batch, logits.channels, logits.length);
    double total = 0.0;
    const double inv_n = 1.0 / static_cast<double>(logits.data.size());
    for (std::size_t i = 0; i < logits.data.size(); ++i) {
        const double z = logits.data[i];
        const double y = labels.data[i];
        require(y == 0.0 || y == 1.0, "bce_with_logits: labels must be 0 or 1");
        total += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
        grad_out.data[i] = static_cast<T>((static_cast<double>(stable_sigmoid(z)) - y) * inv_n);
    }
    return total * inv_n;
}

// Squared error, mean over all elements, with its gradient. Used by the
// LLR-regression baseline.
template <typename T>
double mse_loss(const Tensor3<T>& pred, const Tensor3<T>& target, Tensor3<T>& grad_out) {
    require(pred.same_shape(target), "mse_loss: pred " + pred.shape_str() + " vs target " +
                                         target.shape_str());
    grad_out = Tensor3<T>(pred.batch, pred.channels, pred.length);
    double total = 0.0;
    const double inv_n = 1.0 / static_cast<double>(pred.data.size());
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double d = static_cast<double>(pred.data[i]) - target.data[i];
        total += d * d;
        grad_out.data[i] = static_cast<T>(2.0 * d * inv_n);
    }
    return total * inv_n;
}

} // namespace linksim::nn
