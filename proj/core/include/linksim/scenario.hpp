#pragma once

#include <string>

#include "linksim/channel.hpp"
#include "linksim/equalizer.hpp"
#include "linksim/rng.hpp"
#include "linksim/types.hpp"

namespace linksim {

// One configured channel between modulator output and demodulator input.
// Grammar (whitespace-insensitive):
//   awgn
//   aggn(mu,gamma,rho)
//   awgn+cfo(delta_f)                         delta_f in cycles/symbol
//   rayleigh(max_doppler_hz,symbol_rate_hz)+awgn
struct ChannelScenario {
    enum class Kind { Awgn, Aggn, AwgnCfo, RayleighAwgn };

    Kind kind = Kind::Awgn;
    double mu = 0.0;      // aggn location (per real dimension)
    double gamma = 1.0;   // aggn scale of the unit-power shape draw
    double rho = 1.0;     // aggn shape
    double delta_f = 0.0; // carrier offset, cycles per symbol
    FadingSpec fading{};

    bool uses_fading() const { return kind == Kind::RayleighAwgn; }

    static ChannelScenario parse(const std::string& text);
    std::string str() const; // canonical config-grammar form

    // Pushes a payload burst through the impairments at the given total
    // complex noise variance. The fading scenario prepends the known LMS
    // training prefix, equalizes, and returns the payload-aligned symbols,
    // so callers see the same alignment for every scenario. Frequency
    // offset phase restarts at n = 0 for each call (burst start).
    ComplexSequence transmit(const ComplexSequence& payload, double sigma2, Rng& rng) const;
};

} // namespace linksim
