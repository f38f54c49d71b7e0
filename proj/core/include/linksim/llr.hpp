#pragma once

#include <vector>

#include "linksim/modem.hpp"
#include "linksim/types.hpp"

namespace linksim {

enum class LlrMode { Exact, Maxlog };

// Exact AWGN-assumption LLR per bit:
//   zeta_i = log( sum_{s in S_i^0} exp(-|r-s|^2/sigma2)
//               / sum_{s in S_i^1} exp(-|r-s|^2/sigma2) )
// computed with max-subtraction so 256QAM at high SNR cannot overflow.
// sigma2 is the total complex noise variance (the value N0 returned by
// sigma2_from_ebn0), which makes zeta the true posterior log-odds under
// AWGN. Positive values favor bit 0.
std::vector<double> exact_llr(cplx r, const Constellation& c, double sigma2);

// Max-log approximation:
//   zeta_i ~ (min_{s in S_i^1} |r-s|^2 - min_{s in S_i^0} |r-s|^2) / sigma2.
std::vector<double> maxlog_llr(cplx r, const Constellation& c, double sigma2);

// Concatenated per-symbol LLR vectors in transmit bit order.
std::vector<double> llr_sequence(const ComplexSequence& rx, const Constellation& c,
                                 double sigma2, LlrMode mode);

// Exact per-symbol operation counts of the analytic LLR: squared distances
// cost 3*2^k multiplies and 3*2^k adds, the per-bit ratio costs one divide
// (counted as a multiply) and 2^k - 2 adds, plus 2^k exp and k log calls.
struct ExactLlrOpCounts {
    long long mult = 0;
    long long add = 0;
    long long explog = 0;
};
ExactLlrOpCounts exact_llr_op_counts(const Constellation& c);

} // namespace linksim
