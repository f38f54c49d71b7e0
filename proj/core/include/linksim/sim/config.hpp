#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "linksim/modem.hpp"
#include "linksim/scenario.hpp"

namespace linksim::sim {

enum class Demod { MinDistance, ExactLlr, MaxlogLlr, DemodnetLpr, Llrnet };

Demod demod_from_name(const std::string& name);
std::string demod_name(Demod d);

// One BER experiment: a modulation, a channel, a grid and a set of
// demodulators measured on common received bursts.
struct SweepConfig {
    Modulation modulation = Modulation::Bpsk;
    ChannelScenario scenario{};
    std::vector<double> ebn0_grid_db;
    std::vector<Demod> demodulators;
    bool coded = false; // conv(171,133) + Viterbi when true

    // Per grid point: run whole bursts until bits >= bits_per_point AND
    // errors >= target_errors (per demodulator), or until max_bits_per_point.
    long long bits_per_point = 100000;
    long long target_errors = 500;
    long long max_bits_per_point = 0; // resolved to 10x bits_per_point when 0

    std::uint64_t seed = 1;
    std::string checkpoint;        // demodnet-lpr model
    std::string llrnet_checkpoint; // llrnet model

    int burst_symbols = 1008; // uncoded payload symbols per burst
    int info_bits = 1002;     // coded info bits per burst
    std::string equalizer = "auto"; // auto | lms | none
    std::string output;             // optional CSV path

    void validate() const; // throws Error with the offending key
    bool wants(Demod d) const;
};

// Plain-text config: one `key = value` per line, '#' comments, blank lines
// ignored. Grid syntax: "lo:step:hi" (inclusive) or a comma list.
SweepConfig parse_sweep_config_text(const std::string& text);
SweepConfig parse_sweep_config_file(const std::string& path);

// The resolved config, echoed in parseable key=value form (defaults
// materialized); parse_sweep_config_text round-trips it.
std::string format_sweep_config(const SweepConfig& cfg);

std::vector<double> parse_grid(const std::string& text);

} // namespace linksim::sim
