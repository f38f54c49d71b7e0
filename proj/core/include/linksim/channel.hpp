#pragma once

#include <vector>

#include "linksim/rng.hpp"
#include "linksim/types.hpp"

namespace linksim {

enum class NoiseKind { Awgn, Aggn };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Awgn;
    double sigma2 = 1.0; // total complex noise variance N0 (AWGN)
    double mu = 0.0;     // AGGN location, per real dimension
    double gamma = 1.0;  // AGGN scale, > 0
    double rho = 2.0;    // AGGN shape, > 0 (2 = Gaussian, 1 = Laplacian)
};

struct FadingSpec {
    double max_doppler_hz = 30.0;
    double symbol_rate_hz = 1e6;
    int n_oscillators = 32;

    double normalized_doppler() const { return max_doppler_hz / symbol_rate_hz; }
};

// N0 = 1 / (k * code_rate * 10^(ebn0_db/10)) under unit symbol energy.
double sigma2_from_ebn0(double ebn0_db, int bits_per_symbol, double code_rate);

// Adds complex Gaussian noise, per-dimension variance sigma2/2.
ComplexSequence add_awgn(const ComplexSequence& tx, double sigma2, Rng& rng);

// i.i.d. generalized Gaussian draws: sign * gamma * G^(1/rho) + mu with
// G ~ Gamma(1/rho, 1). Variance is gamma^2 * Gamma(3/rho) / Gamma(1/rho).
std::vector<double> sample_aggn(std::size_t n, double mu, double gamma, double rho, Rng& rng);

// AGGN applied independently per real dimension.
ComplexSequence add_aggn(const ComplexSequence& tx, const NoiseSpec& spec, Rng& rng);

// output(n) = input(n) * exp(j 2 pi delta_f n), n from 0 (burst start).
ComplexSequence apply_frequency_offset(const ComplexSequence& tx, double delta_f);

// Flat Rayleigh fading gain process: sum-of-sinusoids (Zheng-Xiao form of
// the Jakes model) with random angle-of-arrival offset and phases drawn at
// construction. E[|h|^2] = 1; zero Doppler freezes the gain.
class JakesProcess {
public:
    JakesProcess(const FadingSpec& spec, Rng& rng);
    cplx gain(std::size_t n) const;

private:
    double fd_norm_;
    std::vector<double> cos_aoa_;  // cos(alpha_m)
    std::vector<double> sin_aoa_;
    std::vector<double> phase_i_;
    std::vector<double> phase_q_;
    double amp_;
};

struct FadedSignal {
    ComplexSequence faded;
    ComplexSequence gains; // diagnostics only; the demodulator never sees them
};

FadedSignal rayleigh_flat_fade(const ComplexSequence& tx, const FadingSpec& spec, Rng& rng);

} // namespace linksim
