#include "doctest.h"

#include <cmath>

#include "linksim/equalizer.hpp"
#include "linksim/modem.hpp"
#include "linksim/rng.hpp"

using namespace linksim;

namespace {

ComplexSequence random_qpsk(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const Constellation c = build_constellation(Modulation::Qpsk);
    BitStream bits(2 * n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
    return modulate(bits, c);
}

double rms_error(const ComplexSequence& a, const ComplexSequence& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

} // namespace

TEST_CASE("training sequence is fixed, unit modulus, 500 symbols") {
    const ComplexSequence t1 = lms_training_sequence();
    const ComplexSequence t2 = lms_training_sequence();
    REQUIRE(t1.size() == 500);
    CHECK(t1 == t2);
    for (const cplx& s : t1) CHECK(std::abs(std::abs(s) - 1.0) < 1e-12);
    CHECK(lms_training_sequence(100).size() == 100);
    // the shorter sequence is a prefix of the longer one
    const ComplexSequence t3 = lms_training_sequence(100);
    for (int i = 0; i < 100; ++i) CHECK(t3[i] == t1[i]);
}

TEST_CASE("flat gain 2 channel: converges to 0.5 center tap") {
    const ComplexSequence prefix = lms_training_sequence();
    const ComplexSequence payload = random_qpsk(400, 21);

    ComplexSequence rx;
    for (const cplx& s : prefix) rx.push_back(2.0 * s);
    for (const cplx& s : payload) rx.push_back(2.0 * s);

    const LmsResult res = lms_equalize(rx, prefix);
    REQUIRE(res.payload.size() == payload.size());
    CHECK(rms_error(res.payload, payload) < 1e-2);

    REQUIRE(res.taps.size() == 5);
    CHECK(std::abs(res.taps[2] - cplx(0.5, 0.0)) < 0.02);
    for (int i : {0, 1, 3, 4}) CHECK(std::abs(res.taps[i]) < 0.02);
}

TEST_CASE("identity channel: output matches input, near-spike taps") {
    const ComplexSequence prefix = lms_training_sequence();
    const ComplexSequence payload = random_qpsk(300, 22);

    ComplexSequence rx(prefix);
    rx.insert(rx.end(), payload.begin(), payload.end());

    const LmsResult res = lms_equalize(rx, prefix);
    CHECK(rms_error(res.payload, payload) < 1e-2);
    CHECK(std::abs(res.taps[2] - cplx(1.0, 0.0)) < 0.02);
}

TEST_CASE("complex gain is inverted, payload alignment is exact") {
    const cplx h(0.6, -1.1);
    const ComplexSequence prefix = lms_training_sequence();
    const ComplexSequence payload = random_qpsk(256, 23);

    ComplexSequence rx;
    for (const cplx& s : prefix) rx.push_back(h * s);
    for (const cplx& s : payload) rx.push_back(h * s);

    const LmsResult res = lms_equalize(rx, prefix);
    REQUIRE(res.payload.size() == payload.size());
    // element i of the output lines up with payload symbol i — a shifted
    // alignment would leave QPSK symbols essentially uncorrelated
    for (std::size_t i = 0; i < payload.size(); ++i)
        CHECK(std::abs(res.payload[i] - payload[i]) < 0.1);
}

TEST_CASE("training squared error trends downward") {
    const cplx h(0.5, 0.8);
    const ComplexSequence prefix = lms_training_sequence();
    ComplexSequence rx;
    for (const cplx& s : prefix) rx.push_back(h * s);
    rx.push_back(h); // trivial payload

    const LmsResult res = lms_equalize(rx, prefix);
    REQUIRE(res.training_se.size() == prefix.size());
    double first = 0.0, last = 0.0;
    for (int i = 0; i < 100; ++i) {
        first += res.training_se[i];
        last += res.training_se[prefix.size() - 100 + i];
    }
    CHECK(last < first);
}

TEST_CASE("input shorter than the training prefix is rejected") {
    const ComplexSequence prefix = lms_training_sequence();
    ComplexSequence rx(prefix.begin(), prefix.begin() + 100);
    CHECK_THROWS_AS(lms_equalize(rx, prefix), Error);
}
