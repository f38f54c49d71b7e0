#pragma once

#include <vector>

#include "linksim/rng.hpp"
#include "linksim/types.hpp"

namespace linksim {

struct LmsConfig {
    int n_taps = 5;
    double step_fraction = 0.1; // of the stability bound 2/(n_taps * input power)
};

// The fixed known training prefix shared by transmitter and receiver:
// 500 QPSK symbols from a constant-seed generator.
ComplexSequence lms_training_sequence(std::size_t length = 500);

struct LmsResult {
    ComplexSequence payload;         // equalized output, prefix stripped
    std::vector<cplx> taps;          // frozen taps after training
    std::vector<double> training_se; // per-symbol squared error during training
};

// Complex LMS linear equalizer. Taps start as a center spike, adapt over the
// training prefix with mu = step_fraction * 2 / (n_taps * mean |rx|^2
// measured over the prefix), then freeze; the payload is filtered with the
// frozen taps and the center-tap delay is compensated.
LmsResult lms_equalize(const ComplexSequence& rx, const ComplexSequence& training_symbols,
                       const LmsConfig& cfg = {});

} // namespace linksim
