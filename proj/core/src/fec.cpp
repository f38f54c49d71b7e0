#include "linksim/fec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "linksim/channel.hpp"

namespace linksim {

namespace {

inline int parity7(unsigned v) { return std::popcount(v) & 1; }

// Register layout: the encoder state holds the previous 6 input bits,
// most recent in bit 5. With input b the full 7-bit window is
// (b << 6) | state, generator taps are applied MSB = current input.
struct Branch {
    std::uint8_t c0, c1;
};

struct BranchTable {
    // outputs[state][input]
    Branch outputs[64][2];
    explicit BranchTable(const TrellisSpec& t) {
        for (int s = 0; s < 64; ++s) {
            for (int b = 0; b < 2; ++b) {
                const unsigned window = (static_cast<unsigned>(b) << 6) | static_cast<unsigned>(s);
                outputs[s][b].c0 = static_cast<std::uint8_t>(parity7(window & t.generators_octal[0]));
                outputs[s][b].c1 = static_cast<std::uint8_t>(parity7(window & t.generators_octal[1]));
            }
        }
    }
};

} // namespace

BitStream conv_encode(const BitStream& info, const TrellisSpec& t) {
    const BranchTable table(t);
    BitStream out;
    out.reserve(2 * (info.size() + t.n_flush_bits()));
    unsigned state = 0;
    auto push = [&](int b) {
        const Branch br = table.outputs[state][b];
        out.push_back(br.c0);
        out.push_back(br.c1);
        state = ((static_cast<unsigned>(b) << 6) | state) >> 1;
    };
    for (std::uint8_t b : info) {
        require(b <= 1, "conv_encode: info bits must be 0 or 1");
        push(b);
    }
    for (int i = 0; i < t.n_flush_bits(); ++i) push(0);
    return out;
}

BitStream viterbi_decode(const std::vector<double>& soft, const TrellisSpec& t,
                         int traceback_depth) {
    require(soft.size() % 2 == 0, "viterbi_decode: soft input length must be even");
    const std::size_t n_stages = soft.size() / 2;
    require(n_stages > static_cast<std::size_t>(t.n_flush_bits()),
            "viterbi_decode: stream shorter than the flush tail");
    require(traceback_depth >= 1, "viterbi_decode: traceback depth must be >= 1");

    const BranchTable table(t);
    const int n_states = t.n_states();
    constexpr double kNegInf = -1e300;

    std::vector<double> metric(n_states, kNegInf), next(n_states);
    metric[0] = 0.0; // zero initial state

    // decisions[stage] bit s = the register bit dropped on the winning
    // transition into state s; predecessor = ((s & 31) << 1) | bit.
    std::vector<std::uint64_t> decisions(n_stages, 0);
    BitStream decoded(n_stages, 0);
    std::size_t committed = 0;

    auto traceback_from = [&](int state, std::size_t last_stage, std::size_t n_steps,
                              bool commit_all) {
        int s = state;
        std::size_t stage = last_stage;
        for (std::size_t step = 0; step < n_steps; ++step) {
            const int input_bit = s >> 5;
            if (commit_all || step + 1 == n_steps) decoded[stage] = static_cast<std::uint8_t>(input_bit);
            const int dropped = static_cast<int>((decisions[stage] >> s) & 1u);
            s = ((s & 31) << 1) | dropped;
            if (stage == 0) break;
            --stage;
        }
    };

    for (std::size_t stage = 0; stage < n_stages; ++stage) {
        const double m0 = soft[2 * stage];     // positive favors coded bit 0
        const double m1 = soft[2 * stage + 1];
        std::uint64_t dec = 0;
        for (int ns = 0; ns < n_states; ++ns) {
            const int b = ns >> 5;
            const int s0 = (ns & 31) << 1;
            const int s1 = s0 | 1;
            const Branch br0 = table.outputs[s0][b];
            const Branch br1 = table.outputs[s1][b];
            const double cand0 = metric[s0] + (br0.c0 ? -m0 : m0) + (br0.c1 ? -m1 : m1);
            const double cand1 = metric[s1] + (br1.c0 ? -m0 : m0) + (br1.c1 ? -m1 : m1);
            if (cand1 > cand0) {
                next[ns] = cand1;
                dec |= 1ull << ns;
            } else {
                next[ns] = cand0;
            }
        }
        decisions[stage] = dec;
        // normalize so metrics stay bounded on long streams
        const double top = *std::max_element(next.begin(), next.end());
        for (int s = 0; s < n_states; ++s) metric[s] = next[s] - top;

        if (stage + 1 >= static_cast<std::size_t>(traceback_depth) + committed + 1) {
            const int best =
                static_cast<int>(std::max_element(metric.begin(), metric.end()) - metric.begin());
            traceback_from(best, stage, static_cast<std::size_t>(traceback_depth) + 1, false);
            ++committed;
        }
    }

    // zero-terminated stream: final full traceback from state 0
    if (committed < n_stages)
        traceback_from(0, n_stages - 1, n_stages - committed, true);

    decoded.resize(n_stages - t.n_flush_bits());
    return decoded;
}

BitStream viterbi_decode_hard(const BitStream& coded, const TrellisSpec& t, int traceback_depth) {
    std::vector<double> soft(coded.size());
    for (std::size_t i = 0; i < coded.size(); ++i) soft[i] = coded[i] ? -1.0 : 1.0;
    return viterbi_decode(soft, t, traceback_depth);
}

namespace {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

} // namespace

double theoretical_ber(Modulation m, double ebn0_db) {
    const Constellation c = build_constellation(m);
    const double n0 = sigma2_from_ebn0(ebn0_db, c.k, 1.0);
    const double sigma_d = std::sqrt(n0 / 2.0);

    // Per-axis levels with their axis sub-labels, from the I axis (both
    // axes of a square constellation are identical; BPSK has only I).
    const int m_axis = m == Modulation::Bpsk ? 1 : c.k / 2;
    const int n_levels = 1 << m_axis;
    std::vector<std::pair<double, int>> levels(n_levels); // (value, sub-label)
    for (int g = 0; g < n_levels; ++g) {
        const int point_index = g << (c.k - m_axis); // Q sub-label zero
        levels[g] = {c.points[point_index].real(), g};
    }
    std::sort(levels.begin(), levels.end());

    // boundaries midway between adjacent levels
    std::vector<double> bound(n_levels - 1);
    for (int j = 0; j + 1 < n_levels; ++j)
        bound[j] = 0.5 * (levels[j].first + levels[j + 1].first);

    double total = 0.0;
    for (int bit = 0; bit < m_axis; ++bit) {
        for (int l = 0; l < n_levels; ++l) {
            const double v = levels[l].first;
            const int truth = (levels[l].second >> (m_axis - 1 - bit)) & 1;
            for (int j = 0; j < n_levels; ++j) {
                if (((levels[j].second >> (m_axis - 1 - bit)) & 1) == truth) continue;
                const double p_hi = j + 1 < n_levels ? q_func((bound[j] - v) / sigma_d) : 0.0;
                const double p_lo = j > 0 ? q_func((bound[j - 1] - v) / sigma_d) : 1.0;
                total += p_lo - p_hi; // P(decide level j | sent v)
            }
        }
    }
    return total / (m_axis * n_levels);
}

double theoretical_ber(const std::string& name, double ebn0_db) {
    return theoretical_ber(modulation_from_name(name), ebn0_db);
}

} // namespace linksim
