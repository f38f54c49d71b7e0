#pragma once

#include <vector>

#include "linksim/modem.hpp"
#include "linksim/types.hpp"

namespace linksim {

// Rate-1/2, constraint-length-7 convolutional code, generators 171/133
// octal, zero initial state, zero-terminated.
struct TrellisSpec {
    int constraint_length = 7;
    unsigned generators_octal[2] = {0171, 0133};
    int n_states() const { return 1 << (constraint_length - 1); }
    int n_flush_bits() const { return constraint_length - 1; }
};

// Output length = 2 * (len(info) + 6): every info bit plus six zero flush
// bits emits one pair (g171, g133).
BitStream conv_encode(const BitStream& info, const TrellisSpec& t = {});

// Soft-decision Viterbi. soft holds one value per coded bit in LLR sign
// convention (positive favors bit 0); the path metric sum_j soft_j*(1-2c_j)
// is maximized. Decisions are committed through a sliding-window traceback
// of the given depth, with a full traceback from the zero state at stream
// end. Returns the info bits (flush bits stripped), i.e. len(soft)/2 - 6
// bits.
BitStream viterbi_decode(const std::vector<double>& soft, const TrellisSpec& t = {},
                         int traceback_depth = 32);

// Hard-input decoding: bits map to +-1 pseudo-LLRs.
BitStream viterbi_decode_hard(const BitStream& coded, const TrellisSpec& t = {},
                              int traceback_depth = 32);

// Exact uncoded bit error probability for Gray-mapped BPSK/QPSK/square QAM
// under AWGN, by enumeration of the per-axis decision regions.
double theoretical_ber(Modulation m, double ebn0_db);
double theoretical_ber(const std::string& modulation_name, double ebn0_db);

} // namespace linksim
