#pragma once

#include <array>
#include <string>
#include <vector>

#include "linksim/types.hpp"

namespace linksim {

enum class Modulation { Bpsk, Qpsk, Qam16, Qam64, Qam256 };

Modulation modulation_from_name(const std::string& name);
std::string modulation_name(Modulation m);

// A modulation's symbol table. points is indexed by the integer value of the
// k-bit label (first bit of the symbol = MSB of the index). subsets[i][d]
// lists the point indices whose (i+1)-th bit equals d.
struct Constellation {
    Modulation mod;
    std::string name;       // canonical lowercase identifier
    int k = 0;              // bits per symbol
    ComplexSequence points; // 2^k entries, unit average energy
    std::vector<std::array<std::vector<int>, 2>> subsets;

    int size() const { return static_cast<int>(points.size()); }
};

// Mapping convention: square QAM uses per-axis reflected Gray code with
// levels ascending in Gray order ({00,01,11,10} -> {-3,-1,+1,+3} per axis,
// scaled to unit average energy). The first k/2 bits select the I level,
// the rest the Q level. BPSK and QPSK (one bit per axis) map bit 0 to the
// positive level.
Constellation build_constellation(Modulation m);
Constellation build_constellation(const std::string& name);

// len(bits) must be divisible by k.
ComplexSequence modulate(const BitStream& bits, const Constellation& c);

// Euclidean-nearest point per symbol; ties go to the lowest point index.
BitStream hard_demodulate_min_distance(const ComplexSequence& rx, const Constellation& c);
int nearest_point_index(cplx r, const Constellation& c);

// Sign decision on soft values: > 0 -> bit 0, <= 0 -> bit 1.
BitStream hard_decision_from_soft(const std::vector<double>& soft);

// Unpacks the k-bit label of point index (MSB first).
void label_bits(int index, int k, std::uint8_t* out);

} // namespace linksim
