#include "linksim/channel.hpp"

#include <cmath>

namespace linksim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double sigma2_from_ebn0(double ebn0_db, int bits_per_symbol, double code_rate) {
    require(bits_per_symbol >= 1, "sigma2_from_ebn0: bits_per_symbol must be >= 1");
    require(code_rate > 0.0 && code_rate <= 1.0, "sigma2_from_ebn0: code_rate must be in (0,1]");
    return 1.0 / (bits_per_symbol * code_rate * std::pow(10.0, ebn0_db / 10.0));
}

ComplexSequence add_awgn(const ComplexSequence& tx, double sigma2, Rng& rng) {
    require(sigma2 > 0.0, "add_awgn: sigma2 must be > 0");
    const double s = std::sqrt(sigma2 / 2.0);
    ComplexSequence out(tx.size());
    for (std::size_t n = 0; n < tx.size(); ++n) {
        const double wi = rng.normal();
        const double wq = rng.normal();
        out[n] = tx[n] + cplx{s * wi, s * wq};
    }
    return out;
}

std::vector<double> sample_aggn(std::size_t n, double mu, double gamma, double rho, Rng& rng) {
    require(gamma > 0.0, "sample_aggn: gamma must be > 0");
    require(rho > 0.0, "sample_aggn: rho must be > 0");
    std::vector<double> out(n);
    const double inv_rho = 1.0 / rho;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = rng.gamma(inv_rho);
        const double mag = gamma * std::pow(g, inv_rho);
        out[i] = mu + (rng.bit() ? mag : -mag);
    }
    return out;
}

ComplexSequence add_aggn(const ComplexSequence& tx, const NoiseSpec& spec, Rng& rng) {
    const std::vector<double> wi = sample_aggn(tx.size(), spec.mu, spec.gamma, spec.rho, rng);
    const std::vector<double> wq = sample_aggn(tx.size(), spec.mu, spec.gamma, spec.rho, rng);
    ComplexSequence out(tx.size());
    for (std::size_t n = 0; n < tx.size(); ++n) out[n] = tx[n] + cplx{wi[n], wq[n]};
    return out;
}

ComplexSequence apply_frequency_offset(const ComplexSequence& tx, double delta_f) {
    ComplexSequence out(tx.size());
    for (std::size_t n = 0; n < tx.size(); ++n) {
        const double phase = kTwoPi * delta_f * static_cast<double>(n);
        out[n] = tx[n] * cplx{std::cos(phase), std::sin(phase)};
    }
    return out;
}

JakesProcess::JakesProcess(const FadingSpec& spec, Rng& rng) {
    require(spec.max_doppler_hz >= 0.0, "fading: max_doppler_hz must be >= 0");
    require(spec.symbol_rate_hz > 0.0, "fading: symbol_rate_hz must be > 0");
    require(spec.n_oscillators >= 8, "fading: n_oscillators must be >= 8");
    require(spec.normalized_doppler() < 0.5, "fading: normalized Doppler must be < 0.5");

    const int m_osc = spec.n_oscillators;
    fd_norm_ = spec.normalized_doppler();
    amp_ = 1.0 / std::sqrt(static_cast<double>(m_osc));

    const double theta = rng.uniform(-M_PI, M_PI);
    cos_aoa_.resize(m_osc);
    sin_aoa_.resize(m_osc);
    phase_i_.resize(m_osc);
    phase_q_.resize(m_osc);
    for (int m = 0; m < m_osc; ++m) {
        const double alpha = (kTwoPi * (m + 1) - M_PI + theta) / (4.0 * m_osc);
        cos_aoa_[m] = std::cos(alpha);
        sin_aoa_[m] = std::sin(alpha);
        phase_i_[m] = rng.uniform(-M_PI, M_PI);
        phase_q_[m] = rng.uniform(-M_PI, M_PI);
    }
}

cplx JakesProcess::gain(std::size_t n) const {
    const double t = kTwoPi * fd_norm_ * static_cast<double>(n);
    double hi = 0.0, hq = 0.0;
    for (std::size_t m = 0; m < cos_aoa_.size(); ++m) {
        hi += std::cos(t * cos_aoa_[m] + phase_i_[m]);
        hq += std::cos(t * sin_aoa_[m] + phase_q_[m]);
    }
    return {amp_ * hi, amp_ * hq};
}

FadedSignal rayleigh_flat_fade(const ComplexSequence& tx, const FadingSpec& spec, Rng& rng) {
    JakesProcess process(spec, rng);
    FadedSignal out;
    out.faded.resize(tx.size());
    out.gains.resize(tx.size());
    for (std::size_t n = 0; n < tx.size(); ++n) {
        out.gains[n] = process.gain(n);
        out.faded[n] = out.gains[n] * tx[n];
    }
    return out;
}

} // namespace linksim
