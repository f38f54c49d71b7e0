#pragma once

#include <string>
#include <vector>

#include "linksim/sim/config.hpp"

namespace linksim::sim {

struct BerRecord {
    std::string modulation;
    std::string scenario;
    double ebn0_db = 0.0;
    std::string demodulator;
    std::string decoder; // "none" or "viterbi"
    long long bits_counted = 0;
    long long bit_errors = 0;
    double ber = 0.0;
    std::uint64_t seed = 0; // per-point derived seed
};

// Monte Carlo BER measurement. All demodulators at a grid point see the
// same received bursts (common random numbers), so ordering comparisons
// between them are low-variance. Per point and demodulator, bursts run
// until bits >= bits_per_point and errors >= target_errors, or the
// max_bits_per_point cap. Records appear grid-major, demodulator order as
// configured. Deterministic in cfg.
std::vector<BerRecord> run_sweep(const SweepConfig& cfg);

// Exact schema: modulation,scenario,ebn0_db,demodulator,decoder,
// bits_counted,bit_errors,ber,seed. Fields containing commas (parameterized
// scenarios) are RFC-4180 double-quoted.
std::string records_to_csv(const std::vector<BerRecord>& records);
void write_csv(const std::vector<BerRecord>& records, const std::string& path);

} // namespace linksim::sim
