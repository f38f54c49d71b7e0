#include "linksim/equalizer.hpp"

#include <cmath>

#include "linksim/modem.hpp"

namespace linksim {

ComplexSequence lms_training_sequence(std::size_t length) {
    Rng rng(0x1e51a7u); // constant: both ends must generate the same prefix
    const Constellation qpsk = build_constellation(Modulation::Qpsk);
    ComplexSequence out(length);
    for (std::size_t i = 0; i < length; ++i)
        out[i] = qpsk.points[rng.bounded(4)];
    return out;
}

LmsResult lms_equalize(const ComplexSequence& rx, const ComplexSequence& training_symbols,
                       const LmsConfig& cfg) {
    require(cfg.n_taps >= 1 && cfg.n_taps % 2 == 1, "lms_equalize: n_taps must be odd and >= 1");
    const std::size_t n_train = training_symbols.size();
    require(rx.size() >= n_train, "lms_equalize: input shorter than the training prefix");

    const int center = cfg.n_taps / 2;
    const std::size_t n_payload = rx.size() - n_train;

    // filter input with zero padding; tap i sees rx[n - i]
    auto sample = [&](std::ptrdiff_t n) -> cplx {
        if (n < 0 || n >= static_cast<std::ptrdiff_t>(rx.size())) return {0.0, 0.0};
        return rx[static_cast<std::size_t>(n)];
    };

    double power = 0.0;
    for (std::size_t n = 0; n < n_train; ++n) power += std::norm(rx[n]);
    power /= static_cast<double>(n_train);
    const double mu = power > 0.0 ? cfg.step_fraction * 2.0 / (cfg.n_taps * power) : 0.0;

    std::vector<cplx> taps(cfg.n_taps, cplx{0.0, 0.0});
    taps[center] = {1.0, 0.0};

    LmsResult result;
    result.training_se.reserve(n_train);

    // y(n) estimates the reference delayed by the center tap
    auto filter_at = [&](std::ptrdiff_t n) {
        cplx y{0.0, 0.0};
        for (int i = 0; i < cfg.n_taps; ++i) y += taps[i] * sample(n - i);
        return y;
    };

    for (std::size_t m = 0; m < n_train; ++m) {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m) + center;
        const cplx y = filter_at(n);
        const cplx e = training_symbols[m] - y;
        result.training_se.push_back(std::norm(e));
        for (int i = 0; i < cfg.n_taps; ++i)
            taps[i] += mu * e * std::conj(sample(n - i));
    }

    result.payload.resize(n_payload);
    for (std::size_t m = 0; m < n_payload; ++m) {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_train + m) + center;
        result.payload[m] = filter_at(n);
    }
    result.taps = std::move(taps);
    return result;
}

} // namespace linksim
