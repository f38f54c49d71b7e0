#include <benchmark/benchmark.h>

#include "linksim/net/model.hpp"
#include "linksim/nn/layers.hpp"
#include "linksim/rng.hpp"

using namespace linksim;

namespace {

nn::Tensor3f random_input(int b, int c, int l, Rng& rng) {
    nn::Tensor3f x(b, c, l);
    for (float& v : x.data) v = static_cast<float>(rng.normal());
    return x;
}

// Hidden-block shape of the network: C channels in and out, kernel 31.
void BM_Conv1dForward(benchmark::State& state) {
    const int ch = static_cast<int>(state.range(0));
    const int len = 4096;
    Rng rng(1);
    nn::Conv1d<float> conv(ch, ch, 31);
    conv.init_gaussian(rng, 0.05);
    nn::Tensor3f x = random_input(1, ch, len, rng);
    for (auto _ : state) {
        nn::Tensor3f y = conv.forward(x);
        benchmark::DoNotOptimize(y.data.data());
    }
    // one item = one MAC
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(ch) * ch * 31 * len);
}
BENCHMARK(BM_Conv1dForward)->Arg(8)->Arg(16)->Arg(32);

void BM_Conv1dBackward(benchmark::State& state) {
    const int ch = static_cast<int>(state.range(0));
    const int len = 4096;
    Rng rng(2);
    nn::Conv1d<float> conv(ch, ch, 31);
    conv.init_gaussian(rng, 0.05);
    nn::Tensor3f x = random_input(1, ch, len, rng);
    nn::Tensor3f g = random_input(1, ch, len, rng);
    conv.forward(x);
    for (auto _ : state) {
        nn::Tensor3f gx = conv.backward(g);
        benchmark::DoNotOptimize(gx.data.data());
    }
    // input and weight gradients each cost one MAC pass
    state.SetItemsProcessed(state.iterations() * 2LL * ch * ch * 31 * len);
}
BENCHMARK(BM_Conv1dBackward)->Arg(8)->Arg(16)->Arg(32);

void BM_BatchNormTrain(benchmark::State& state) {
    Rng rng(3);
    nn::BatchNorm1d<float> bn(16);
    nn::Tensor3f x = random_input(128, 16, 192, rng);
    for (auto _ : state) {
        nn::Tensor3f y = bn.forward(x, nn::Mode::Train);
        benchmark::DoNotOptimize(y.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(x.data.size()));
}
BENCHMARK(BM_BatchNormTrain);

// Inference over a 1008-symbol burst, the sweep engine's unit of work.
// range(0) is bits per symbol.
void BM_ModelLogits(benchmark::State& state) {
    const Modulation m = state.range(0) == 1 ? Modulation::Bpsk : Modulation::Qam16;
    net::DemodNetModel model = net::build_demodnet(m, 16, 7);
    model.mark_inference_ready();
    Rng rng(4);
    ComplexSequence rx(1008);
    for (cplx& v : rx) v = cplx(rng.normal(), rng.normal());
    for (auto _ : state) {
        std::vector<double> z = net::model_logits(model, rx);
        benchmark::DoNotOptimize(z.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(rx.size()));
}
BENCHMARK(BM_ModelLogits)->Arg(1)->Arg(4);

} // namespace
