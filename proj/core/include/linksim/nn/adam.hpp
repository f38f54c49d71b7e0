#pragma once

#include <cmath>
#include <vector>

#include "linksim/nn/tensor.hpp"
#include "linksim/types.hpp"

namespace linksim::nn {

// Adam with bias correction. Moments are kept in double regardless of the
// parameter scalar so that long runs don't drift.
template <typename T>
class Adam {
public:
    explicit Adam(std::vector<ParamView<T>> params, double lr = 3e-3, double beta1 = 0.9,
                  double beta2 = 0.999, double eps = 1e-8)
        : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
        std::size_t n = 0;
        for (const auto& p : params_) n += p.n;
        m_.assign(n, 0.0);
        v_.assign(n, 0.0);
    }

    void set_lr(double lr) { lr_ = lr; }
    double lr() const { return lr_; }
    long long step_count() const { return t_; }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
        std::size_t off = 0;
        for (const auto& p : params_) {
            for (std::size_t i = 0; i < p.n; ++i) {
                const double g = p.grad[i];
                double& m = m_[off + i];
                double& v = v_[off + i];
                m = beta1_ * m + (1.0 - beta1_) * g;
                v = beta2_ * v + (1.0 - beta2_) * g * g;
                const double mhat = m / bc1;
                const double vhat = v / bc2;
                p.value[i] = static_cast<T>(p.value[i] - lr_ * mhat / (std::sqrt(vhat) + eps_));
            }
            off += p.n;
        }
    }

private:
    std::vector<ParamView<T>> params_;
    double lr_, beta1_, beta2_, eps_;
    std::vector<double> m_, v_;
    long long t_ = 0;
};

} // namespace linksim::nn
