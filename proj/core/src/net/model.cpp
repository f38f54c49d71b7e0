#include "linksim/net/model.hpp"

#include <algorithm>
#include <cstdio>

#include "linksim/llr.hpp"

namespace linksim::net {

std::string head_name(HeadKind h) {
    return h == HeadKind::Sigmoid ? "sigmoid" : "linear";
}

DemodNetModel build_demodnet(Modulation m, int hidden_channels, std::uint64_t init_seed,
                             HeadKind head) {
    ModelConfig cfg;
    cfg.modulation = m;
    cfg.hidden_channels = hidden_channels;
    cfg.head = head;
    DemodNetModel model(cfg);
    Rng rng(derive_seed(init_seed, 0x1e17ULL));
    model.init_params(rng, 0.05);
    return model;
}

nn::Tensor3f features_from_symbols(const ComplexSequence& rx) {
    nn::Tensor3f x(1, 2, static_cast<int>(rx.size()));
    float* re = x.row(0, 0);
    float* im = x.row(0, 1);
    for (std::size_t i = 0; i < rx.size(); ++i) {
        re[i] = static_cast<float>(rx[i].real());
        im[i] = static_cast<float>(rx[i].imag());
    }
    return x;
}

std::vector<double> model_logits(DemodNetModel& model, const ComplexSequence& rx) {
    require(rx.size() >= kMinInputSymbols,
            "demodnet: input must contain at least " + std::to_string(kMinInputSymbols) +
                " symbols, got " + std::to_string(rx.size()));
    const int k = model.k();
    const std::size_t n = rx.size();
    std::vector<double> out(n * static_cast<std::size_t>(k));

    // Conv-stack receptive field in bits on each side; windows overlap by a
    // symbol margin covering it, so windowed evaluation is exact.
    const int rf_bits =
        (model.config().n_hidden_blocks + 1) * (model.config().hidden_kernel - 1) / 2;
    const std::size_t margin = static_cast<std::size_t>((rf_bits + k - 1) / k) + 1;
    const std::size_t chunk = 4096;

    for (std::size_t a = 0; a < n; a += chunk) {
        const std::size_t b = std::min(n, a + chunk);
        const std::size_t lo = a >= margin ? a - margin : 0;
        const std::size_t hi = std::min(n, b + margin);
        const ComplexSequence window(rx.begin() + static_cast<std::ptrdiff_t>(lo),
                                     rx.begin() + static_cast<std::ptrdiff_t>(hi));
        nn::Tensor3f z = model.forward(features_from_symbols(window), nn::Mode::Infer);
        const float* zr = z.row(0, 0);
        const std::size_t first = (a - lo) * static_cast<std::size_t>(k);
        const std::size_t count = (b - a) * static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < count; ++i)
            out[a * static_cast<std::size_t>(k) + i] = zr[first + i];
    }
    return out;
}

std::vector<double> model_probabilities(DemodNetModel& model, const ComplexSequence& rx) {
    require(model.config().head == HeadKind::Sigmoid,
            "demodnet: probabilities are only defined for the sigmoid head");
    std::vector<double> z = model_logits(model, rx);
    for (double& v : z) v = nn::stable_sigmoid(v);
    return z;
}

std::vector<double> model_soft_llr(DemodNetModel& model, const ComplexSequence& rx) {
    std::vector<double> z = model_logits(model, rx);
    if (model.config().head == HeadKind::Sigmoid)
        for (double& v : z) v = -v; // Eq. (10): xi = -z
    return z;
}

std::vector<double> lpr_from_probabilities(const std::vector<double>& probs) {
    std::vector<double> out(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        require(probs[i] > 0.0 && probs[i] < 1.0, "lpr: probabilities must lie in (0,1)");
        out[i] = std::log((1.0 - probs[i]) / probs[i]);
    }
    return out;
}

namespace {

// Dense-counting convention per output element: a conv costs c_in*k_len
// multiplies and c_in*k_len adds (sum tree + bias); inference BN is one
// fused multiply-add per element.
LayerOps conv_ops(const std::string& name, long long c_in, long long k_len,
                  long long elements_per_symbol) {
    LayerOps ops;
    ops.name = name;
    ops.mult = c_in * k_len * elements_per_symbol;
    ops.add = c_in * k_len * elements_per_symbol;
    return ops;
}

LayerOps bn_ops(const std::string& name, long long elements_per_symbol) {
    LayerOps ops;
    ops.name = name;
    ops.mult = elements_per_symbol;
    ops.add = elements_per_symbol;
    return ops;
}

LayerOps relu_ops(const std::string& name, long long elements_per_symbol) {
    LayerOps ops;
    ops.name = name;
    ops.cmp = elements_per_symbol;
    return ops;
}

} // namespace

ComplexityReport count_ops(const DemodNetModel& model) {
    const ModelConfig& cfg = model.config();
    const long long k = model.k();
    const long long C = cfg.hidden_channels;
    const long long klen = cfg.hidden_kernel;

    ComplexityReport report;
    report.k = static_cast<int>(k);

    report.layers.push_back(conv_ops("deconv 2->" + std::to_string(C), 2, 1, k * C));
    report.layers.push_back(bn_ops("bn 0", k * C));
    report.layers.push_back(relu_ops("relu 0", k * C));
    for (int i = 0; i < cfg.n_hidden_blocks; ++i) {
        const std::string idx = std::to_string(i + 1);
        report.layers.push_back(conv_ops("conv " + idx + " " + std::to_string(C) + "->" +
                                             std::to_string(C) + " k" + std::to_string(klen),
                                         C, klen, k * C));
        report.layers.push_back(bn_ops("bn " + idx, k * C));
        report.layers.push_back(relu_ops("relu " + idx, k * C));
    }
    report.layers.push_back(conv_ops("final conv " + std::to_string(C) + "->1 k" +
                                         std::to_string(klen),
                                     C, klen, k));
    if (cfg.head == HeadKind::Sigmoid) {
        LayerOps sig;
        sig.name = "sigmoid";
        sig.mult = k; // the division
        sig.add = k;
        sig.explog = k;
        report.layers.push_back(sig);
    }

    report.total.name = "total";
    for (const LayerOps& l : report.layers) {
        report.total.mult += l.mult;
        report.total.add += l.add;
        report.total.cmp += l.cmp;
        report.total.explog += l.explog;
    }

    const ExactLlrOpCounts ref = exact_llr_op_counts(model.constellation());
    report.exact_llr.name = "exactllr (analytic)";
    report.exact_llr.mult = ref.mult;
    report.exact_llr.add = ref.add;
    report.exact_llr.explog = ref.explog;
    return report;
}

std::string format_ops(const ComplexityReport& report) {
    std::string out = "per-symbol operation counts (k=" + std::to_string(report.k) + ")\n";
    char line[192];
    std::snprintf(line, sizeof(line), "  %-26s %12s %12s %10s %10s\n", "layer", "mult", "add",
                  "cmp", "exp/log");
    out += line;
    auto emit = [&](const LayerOps& l) {
        std::snprintf(line, sizeof(line), "  %-26s %12lld %12lld %10lld %10lld\n",
                      l.name.c_str(), l.mult, l.add, l.cmp, l.explog);
        out += line;
    };
    for (const LayerOps& l : report.layers) emit(l);
    emit(report.total);
    emit(report.exact_llr);
    return out;
}

} // namespace linksim::net
