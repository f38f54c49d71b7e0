#include "linksim/net/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace linksim::net {

namespace {

enum class LayerKind : std::uint8_t { Deconv = 0, Conv = 1, Bn = 2 };

void put_u8(std::ostream& os, std::uint8_t v) {
    os.put(static_cast<char>(v));
}

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

void put_f32_array(std::ostream& os, const std::vector<float>& v) {
    for (float f : v) put_u32(os, std::bit_cast<std::uint32_t>(f));
}

void put_string(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint8_t get_u8(std::istream& is) {
    char c;
    require(static_cast<bool>(is.get(c)), "checkpoint: truncated file");
    return static_cast<std::uint8_t>(c);
}

std::uint32_t get_u32(std::istream& is) {
    char b[4];
    require(static_cast<bool>(is.read(b, 4)), "checkpoint: truncated file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    char b[8];
    require(static_cast<bool>(is.read(b, 8)), "checkpoint: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

void get_f32_array(std::istream& is, std::vector<float>& v) {
    for (float& f : v) f = std::bit_cast<float>(get_u32(is));
}

std::string get_string(std::istream& is) {
    const std::uint32_t n = get_u32(is);
    require(n <= 256, "checkpoint: implausible string length");
    std::string s(n, '\0');
    require(static_cast<bool>(is.read(s.data(), n)), "checkpoint: truncated file");
    return s;
}

template <typename Layer>
void put_conv_like(std::ostream& os, LayerKind kind, Layer& layer, std::uint32_t d0,
                   std::uint32_t d1, std::uint32_t d2) {
    put_u8(os, static_cast<std::uint8_t>(kind));
    put_u32(os, 3);
    put_u32(os, d0);
    put_u32(os, d1);
    put_u32(os, d2);
    put_f32_array(os, layer.weights());
    put_f32_array(os, layer.bias());
}

void put_bn(std::ostream& os, nn::BatchNorm1d<float>& bn) {
    put_u8(os, static_cast<std::uint8_t>(LayerKind::Bn));
    put_u32(os, 1);
    put_u32(os, static_cast<std::uint32_t>(bn.channels()));
    put_f32_array(os, bn.gamma());
    put_f32_array(os, bn.beta());
    put_f32_array(os, bn.running_mean());
    put_f32_array(os, bn.running_var());
    put_u64(os, static_cast<std::uint64_t>(bn.batches_seen()));
}

template <typename Layer>
void get_conv_like(std::istream& is, LayerKind expect, Layer& layer, std::uint32_t d0,
                   std::uint32_t d1, std::uint32_t d2, const char* what) {
    require(get_u8(is) == static_cast<std::uint8_t>(expect),
            std::string("checkpoint: expected ") + what + " layer record");
    require(get_u32(is) == 3, "checkpoint: bad dim count for conv-like layer");
    require(get_u32(is) == d0 && get_u32(is) == d1 && get_u32(is) == d2,
            std::string("checkpoint: shape mismatch in ") + what + " record");
    get_f32_array(is, layer.weights());
    get_f32_array(is, layer.bias());
}

void get_bn(std::istream& is, nn::BatchNorm1d<float>& bn) {
    require(get_u8(is) == static_cast<std::uint8_t>(LayerKind::Bn),
            "checkpoint: expected bn layer record");
    require(get_u32(is) == 1, "checkpoint: bad dim count for bn layer");
    require(get_u32(is) == static_cast<std::uint32_t>(bn.channels()),
            "checkpoint: shape mismatch in bn record");
    get_f32_array(is, bn.gamma());
    get_f32_array(is, bn.beta());
    get_f32_array(is, bn.running_mean());
    get_f32_array(is, bn.running_var());
    bn.restore_batches_seen(static_cast<long long>(get_u64(is)));
}

ModelConfig read_header(std::istream& is) {
    char magic[8];
    require(static_cast<bool>(is.read(magic, 8)) && std::memcmp(magic, kCheckpointMagic, 8) == 0,
            "checkpoint: bad magic (not a linksim checkpoint)");
    const std::uint32_t version = get_u32(is);
    require(version == kCheckpointVersion,
            "checkpoint: unsupported format version " + std::to_string(version));
    ModelConfig cfg;
    const std::uint8_t head = get_u8(is);
    require(head <= 1, "checkpoint: unknown head kind");
    cfg.head = static_cast<HeadKind>(head);
    cfg.modulation = modulation_from_name(get_string(is));
    const std::uint32_t k = get_u32(is);
    cfg.hidden_channels = static_cast<int>(get_u32(is));
    cfg.hidden_kernel = static_cast<int>(get_u32(is));
    cfg.n_hidden_blocks = static_cast<int>(get_u32(is));
    require(k == static_cast<std::uint32_t>(build_constellation(cfg.modulation).k),
            "checkpoint: stored k disagrees with the modulation");
    return cfg;
}

} // namespace

void save_checkpoint(DemodNetModel& model, std::ostream& os) {
    const ModelConfig& cfg = model.config();
    os.write(kCheckpointMagic, 8);
    put_u32(os, kCheckpointVersion);
    put_u8(os, static_cast<std::uint8_t>(cfg.head));
    put_string(os, modulation_name(cfg.modulation));
    put_u32(os, static_cast<std::uint32_t>(model.k()));
    put_u32(os, static_cast<std::uint32_t>(cfg.hidden_channels));
    put_u32(os, static_cast<std::uint32_t>(cfg.hidden_kernel));
    put_u32(os, static_cast<std::uint32_t>(cfg.n_hidden_blocks));

    const std::uint32_t n_layers = 2 + 2 * static_cast<std::uint32_t>(cfg.n_hidden_blocks) + 1;
    put_u32(os, n_layers);
    const auto C = static_cast<std::uint32_t>(cfg.hidden_channels);
    const auto klen = static_cast<std::uint32_t>(cfg.hidden_kernel);
    put_conv_like(os, LayerKind::Deconv, model.deconv(), C, 2,
                  static_cast<std::uint32_t>(model.k()));
    put_bn(os, model.bn_in());
    for (int i = 0; i < cfg.n_hidden_blocks; ++i) {
        put_conv_like(os, LayerKind::Conv, model.convs()[static_cast<std::size_t>(i)], C, C, klen);
        put_bn(os, model.bns()[static_cast<std::size_t>(i)]);
    }
    put_conv_like(os, LayerKind::Conv, model.head_conv(), 1, C, klen);
    require(static_cast<bool>(os), "checkpoint: write failed");
}

void save_checkpoint(DemodNetModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), "checkpoint: cannot open '" + path + "' for writing");
    save_checkpoint(model, os);
    os.flush();
    require(static_cast<bool>(os), "checkpoint: write to '" + path + "' failed");
}

DemodNetModel load_checkpoint(std::istream& is) {
    const ModelConfig cfg = read_header(is);
    DemodNetModel model(cfg);
    const std::uint32_t n_layers = get_u32(is);
    require(n_layers == 2 + 2 * static_cast<std::uint32_t>(cfg.n_hidden_blocks) + 1,
            "checkpoint: layer count disagrees with the architecture header");
    const auto C = static_cast<std::uint32_t>(cfg.hidden_channels);
    const auto klen = static_cast<std::uint32_t>(cfg.hidden_kernel);
    get_conv_like(is, LayerKind::Deconv, model.deconv(), C, 2,
                  static_cast<std::uint32_t>(model.k()), "deconv");
    get_bn(is, model.bn_in());
    for (int i = 0; i < cfg.n_hidden_blocks; ++i) {
        get_conv_like(is, LayerKind::Conv, model.convs()[static_cast<std::size_t>(i)], C, C, klen,
                      "conv");
        get_bn(is, model.bns()[static_cast<std::size_t>(i)]);
    }
    get_conv_like(is, LayerKind::Conv, model.head_conv(), 1, C, klen, "final conv");
    return model;
}

DemodNetModel load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), "checkpoint: cannot open '" + path + "'");
    return load_checkpoint(is);
}

ModelConfig read_checkpoint_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), "checkpoint: cannot open '" + path + "'");
    return read_header(is);
}

} // namespace linksim::net
