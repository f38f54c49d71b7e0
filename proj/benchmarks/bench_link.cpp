#include <benchmark/benchmark.h>

#include "linksim/channel.hpp"
#include "linksim/equalizer.hpp"
#include "linksim/fec.hpp"
#include "linksim/llr.hpp"
#include "linksim/modem.hpp"
#include "linksim/rng.hpp"

using namespace linksim;

namespace {

Modulation mod_from_k(int k) {
    switch (k) {
    case 1: return Modulation::Bpsk;
    case 2: return Modulation::Qpsk;
    case 4: return Modulation::Qam16;
    case 6: return Modulation::Qam64;
    case 8: return Modulation::Qam256;
    }
    throw Error("bench: unsupported bits per symbol");
}

ComplexSequence noisy_burst(const Constellation& c, std::size_t n_symbols, double ebn0_db,
                            Rng& rng) {
    BitStream bits(n_symbols * static_cast<std::size_t>(c.k));
    for (std::uint8_t& b : bits) b = rng.bit() ? 1 : 0;
    const double s2 = sigma2_from_ebn0(ebn0_db, c.k, 1.0);
    return add_awgn(modulate(bits, c), s2, rng);
}

void BM_ExactLlr(benchmark::State& state) {
    const Constellation c = build_constellation(mod_from_k(static_cast<int>(state.range(0))));
    Rng rng(10);
    const ComplexSequence rx = noisy_burst(c, 1024, 10.0, rng);
    const double s2 = sigma2_from_ebn0(10.0, c.k, 1.0);
    for (auto _ : state) {
        std::vector<double> llr = llr_sequence(rx, c, s2, LlrMode::Exact);
        benchmark::DoNotOptimize(llr.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(rx.size()));
}
BENCHMARK(BM_ExactLlr)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void BM_MaxlogLlr(benchmark::State& state) {
    const Constellation c = build_constellation(mod_from_k(static_cast<int>(state.range(0))));
    Rng rng(11);
    const ComplexSequence rx = noisy_burst(c, 1024, 10.0, rng);
    const double s2 = sigma2_from_ebn0(10.0, c.k, 1.0);
    for (auto _ : state) {
        std::vector<double> llr = llr_sequence(rx, c, s2, LlrMode::Maxlog);
        benchmark::DoNotOptimize(llr.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(rx.size()));
}
BENCHMARK(BM_MaxlogLlr)->Arg(4)->Arg(8);

void BM_ViterbiSoft(benchmark::State& state) {
    Rng rng(12);
    const Constellation bpsk = build_constellation(Modulation::Bpsk);
    BitStream info(1000);
    for (std::uint8_t& b : info) b = rng.bit() ? 1 : 0;
    const BitStream coded = conv_encode(info);
    const double s2 = sigma2_from_ebn0(3.0, 1, 0.5);
    const ComplexSequence rx = add_awgn(modulate(coded, bpsk), s2, rng);
    const std::vector<double> soft = llr_sequence(rx, bpsk, s2, LlrMode::Exact);
    for (auto _ : state) {
        BitStream dec = viterbi_decode(soft);
        benchmark::DoNotOptimize(dec.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(info.size()));
}
BENCHMARK(BM_ViterbiSoft);

void BM_LmsEqualize(benchmark::State& state) {
    Rng rng(13);
    const Constellation qpsk = build_constellation(Modulation::Qpsk);
    const ComplexSequence prefix = lms_training_sequence();
    ComplexSequence tx = prefix;
    const ComplexSequence payload = noisy_burst(qpsk, 1008, 30.0, rng);
    tx.insert(tx.end(), payload.begin(), payload.end());
    for (auto _ : state) {
        LmsResult r = lms_equalize(tx, prefix);
        benchmark::DoNotOptimize(r.payload.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(payload.size()));
}
BENCHMARK(BM_LmsEqualize);

void BM_JakesGain(benchmark::State& state) {
    Rng rng(14);
    const FadingSpec spec;
    const JakesProcess p(spec, rng);
    for (auto _ : state) {
        cplx acc = 0.0;
        for (std::size_t n = 0; n < 4096; ++n) acc += p.gain(n);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_JakesGain);

} // namespace

BENCHMARK_MAIN();
