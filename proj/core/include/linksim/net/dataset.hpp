#pragma once

#include <cstdint>
#include <vector>

#include "linksim/modem.hpp"
#include "linksim/scenario.hpp"
#include "linksim/types.hpp"

namespace linksim::net {

// Supervised demodulation corpus: each sample is one independent burst of
// received symbols paired with the bits that produced it. Eb/N0 varies
// across samples (mixed training), so the per-sample value rides along.
struct Dataset {
    struct Sample {
        ComplexSequence rx; // length symbols_per_sample
        BitStream bits;     // length k * symbols_per_sample
        double ebn0_db = 0.0;
        double sigma2 = 0.0;
    };

    Modulation modulation = Modulation::Bpsk;
    std::string scenario;
    std::vector<double> ebn0_list_db;
    int symbols_per_sample = 0;
    std::uint64_t seed = 0;
    std::vector<Sample> samples;
};

// i.i.d. uniform bits -> modulate -> scenario impairments (the fading
// scenario runs its training prefix + LMS equalizer per burst, mirroring
// evaluation) -> (rx, bits) pairs, samples_per_ebn0 bursts per grid point
// in grid order. Deterministic in seed.
Dataset generate_dataset(const Constellation& c, const ChannelScenario& scenario,
                         const std::vector<double>& ebn0_list_db, int samples_per_ebn0,
                         int symbols_per_sample, std::uint64_t seed);

} // namespace linksim::net
