#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linksim {

using cplx = std::complex<double>;

// Ordered {0,1} payload. uint8_t keeps it compact and indexable.
using BitStream = std::vector<std::uint8_t>;

// Ordered complex baseband symbols, dimensionless units.
using ComplexSequence = std::vector<cplx>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

} // namespace linksim
