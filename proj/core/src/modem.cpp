#include "linksim/modem.hpp"

#include <cmath>
#include <limits>

namespace linksim {

Modulation modulation_from_name(const std::string& name) {
    if (name == "bpsk") return Modulation::Bpsk;
    if (name == "qpsk") return Modulation::Qpsk;
    if (name == "qam16") return Modulation::Qam16;
    if (name == "qam64") return Modulation::Qam64;
    if (name == "qam256") return Modulation::Qam256;
    throw Error("unknown modulation '" + name + "' (expected bpsk|qpsk|qam16|qam64|qam256)");
}

std::string modulation_name(Modulation m) {
    switch (m) {
        case Modulation::Bpsk: return "bpsk";
        case Modulation::Qpsk: return "qpsk";
        case Modulation::Qam16: return "qam16";
        case Modulation::Qam64: return "qam64";
        case Modulation::Qam256: return "qam256";
    }
    throw Error("invalid modulation enum");
}

void label_bits(int index, int k, std::uint8_t* out) {
    for (int i = 0; i < k; ++i)
        out[i] = static_cast<std::uint8_t>((index >> (k - 1 - i)) & 1);
}

namespace {

int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::Bpsk: return 1;
        case Modulation::Qpsk: return 2;
        case Modulation::Qam16: return 4;
        case Modulation::Qam64: return 6;
        case Modulation::Qam256: return 8;
    }
    throw Error("invalid modulation enum");
}

// Level for an m-bit axis sub-label. One-bit axes put bit 0 on the positive
// level; wider axes follow the reflected Gray code, levels ascending with
// Gray index.
double axis_level(int gray_label, int m) {
    if (m == 1) return gray_label == 0 ? 1.0 : -1.0;
    int level_index = -1;
    for (int l = 0; l < (1 << m); ++l) {
        if ((l ^ (l >> 1)) == gray_label) {
            level_index = l;
            break;
        }
    }
    return static_cast<double>(2 * level_index - ((1 << m) - 1));
}

} // namespace

Constellation build_constellation(Modulation m) {
    Constellation c;
    c.mod = m;
    c.name = modulation_name(m);
    c.k = bits_per_symbol(m);
    const int n = 1 << c.k;

    c.points.resize(n);
    if (m == Modulation::Bpsk) {
        c.points[0] = {1.0, 0.0};
        c.points[1] = {-1.0, 0.0};
    } else {
        const int mi = c.k / 2; // bits per axis
        const int axis_size = 1 << mi;
        // unit average energy: per-axis mean power of {+-1,+-3,...} is (4^mi - 1)/3
        const double scale = 1.0 / std::sqrt(2.0 * (axis_size * axis_size - 1) / 3.0);
        for (int idx = 0; idx < n; ++idx) {
            const int gi = idx >> mi;            // first mi bits -> I
            const int gq = idx & (axis_size - 1); // last mi bits -> Q
            c.points[idx] = {axis_level(gi, mi) * scale, axis_level(gq, mi) * scale};
        }
    }

    c.subsets.resize(c.k);
    for (int i = 0; i < c.k; ++i) {
        for (int idx = 0; idx < n; ++idx) {
            const int d = (idx >> (c.k - 1 - i)) & 1;
            c.subsets[i][d].push_back(idx);
        }
    }
    return c;
}

Constellation build_constellation(const std::string& name) {
    return build_constellation(modulation_from_name(name));
}

ComplexSequence modulate(const BitStream& bits, const Constellation& c) {
    require(bits.size() % static_cast<std::size_t>(c.k) == 0,
            "modulate: bit count " + std::to_string(bits.size()) +
                " not divisible by k=" + std::to_string(c.k));
    const std::size_t n_sym = bits.size() / c.k;
    ComplexSequence out(n_sym);
    for (std::size_t s = 0; s < n_sym; ++s) {
        int idx = 0;
        for (int i = 0; i < c.k; ++i) idx = (idx << 1) | bits[s * c.k + i];
        out[s] = c.points[idx];
    }
    return out;
}

int nearest_point_index(cplx r, const Constellation& c) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.size(); ++i) {
        const double d = std::norm(r - c.points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

BitStream hard_demodulate_min_distance(const ComplexSequence& rx, const Constellation& c) {
    BitStream out(rx.size() * c.k);
    for (std::size_t s = 0; s < rx.size(); ++s)
        label_bits(nearest_point_index(rx[s], c), c.k, out.data() + s * c.k);
    return out;
}

BitStream hard_decision_from_soft(const std::vector<double>& soft) {
    BitStream out(soft.size());
    for (std::size_t i = 0; i < soft.size(); ++i) out[i] = soft[i] > 0.0 ? 0 : 1;
    return out;
}

} // namespace linksim
