#include "linksim/sim/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <optional>

#include "linksim/channel.hpp"
#include "linksim/fec.hpp"
#include "linksim/llr.hpp"
#include "linksim/net/checkpoint.hpp"

namespace linksim::sim {

namespace {

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

net::DemodNetModel load_model(const std::string& path, net::HeadKind head, Modulation mod,
                              const char* who) {
    net::DemodNetModel model = net::load_checkpoint(path);
    require(model.config().head == head, std::string("sweep: checkpoint '") + path + "' has a " +
                                             net::head_name(model.config().head) +
                                             " head; " + who + " needs " + net::head_name(head));
    require(model.config().modulation == mod,
            std::string("sweep: checkpoint '") + path + "' was trained for " +
                modulation_name(model.config().modulation) + ", the sweep runs " +
                modulation_name(mod));
    return model;
}

} // namespace

std::vector<BerRecord> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const Constellation c = build_constellation(cfg.modulation);
    const double code_rate = cfg.coded ? 0.5 : 1.0;
    const long long max_bits =
        cfg.max_bits_per_point > 0 ? cfg.max_bits_per_point : 10 * cfg.bits_per_point;

    std::optional<net::DemodNetModel> lpr_model;
    std::optional<net::DemodNetModel> llrnet_model;
    if (cfg.wants(Demod::DemodnetLpr))
        lpr_model = load_model(cfg.checkpoint, net::HeadKind::Sigmoid, cfg.modulation,
                               "demodnet-lpr");
    if (cfg.wants(Demod::Llrnet))
        llrnet_model = load_model(cfg.llrnet_checkpoint, net::HeadKind::Linear, cfg.modulation,
                                  "llrnet");

    const long long payload_bits =
        cfg.coded ? cfg.info_bits : static_cast<long long>(cfg.burst_symbols) * c.k;

    std::vector<BerRecord> records;
    records.reserve(cfg.ebn0_grid_db.size() * cfg.demodulators.size());

    for (std::size_t gi = 0; gi < cfg.ebn0_grid_db.size(); ++gi) {
        const double ebn0 = cfg.ebn0_grid_db[gi];
        const double sigma2 = sigma2_from_ebn0(ebn0, c.k, code_rate);
        const std::uint64_t point_seed = derive_seed(cfg.seed, gi);
        Rng rng(point_seed);

        const std::size_t nd = cfg.demodulators.size();
        std::vector<long long> bits(nd, 0), errors(nd, 0);
        std::vector<bool> done(nd, false);

        auto all_done = [&] {
            for (bool d : done)
                if (!d) return false;
            return true;
        };

        BitStream payload(static_cast<std::size_t>(cfg.coded ? cfg.info_bits : payload_bits));
        while (!all_done()) {
            for (auto& b : payload) b = static_cast<std::uint8_t>(rng.bit());
            const ComplexSequence tx =
                modulate(cfg.coded ? conv_encode(payload) : payload, c);
            const ComplexSequence rx = cfg.scenario.transmit(tx, sigma2, rng);

            for (std::size_t di = 0; di < nd; ++di) {
                if (done[di]) continue;
                BitStream decided;
                switch (cfg.demodulators[di]) {
                case Demod::MinDistance: {
                    const BitStream hard = hard_demodulate_min_distance(rx, c);
                    decided = cfg.coded ? viterbi_decode_hard(hard) : hard;
                    break;
                }
                case Demod::ExactLlr:
                case Demod::MaxlogLlr: {
                    const LlrMode mode = cfg.demodulators[di] == Demod::ExactLlr
                                             ? LlrMode::Exact
                                             : LlrMode::Maxlog;
                    const std::vector<double> soft = llr_sequence(rx, c, sigma2, mode);
                    decided = cfg.coded ? viterbi_decode(soft) : hard_decision_from_soft(soft);
                    break;
                }
                case Demod::DemodnetLpr:
                case Demod::Llrnet: {
                    net::DemodNetModel& model = cfg.demodulators[di] == Demod::DemodnetLpr
                                                    ? *lpr_model
                                                    : *llrnet_model;
                    const std::vector<double> soft = net::model_soft_llr(model, rx);
                    decided = cfg.coded ? viterbi_decode(soft) : hard_decision_from_soft(soft);
                    break;
                }
                }
                require(decided.size() == payload.size(), "sweep: demodulated length mismatch");
                for (std::size_t i = 0; i < payload.size(); ++i)
                    errors[di] += decided[i] != payload[i];
                bits[di] += payload_bits;
                if (bits[di] >= max_bits ||
                    (bits[di] >= cfg.bits_per_point && errors[di] >= cfg.target_errors))
                    done[di] = true;
            }
        }

        for (std::size_t di = 0; di < nd; ++di) {
            BerRecord rec;
            rec.modulation = c.name;
            rec.scenario = cfg.scenario.str();
            rec.ebn0_db = ebn0;
            rec.demodulator = demod_name(cfg.demodulators[di]);
            rec.decoder = cfg.coded ? "viterbi" : "none";
            rec.bits_counted = bits[di];
            rec.bit_errors = errors[di];
            rec.ber = static_cast<double>(errors[di]) / static_cast<double>(bits[di]);
            rec.seed = point_seed;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::string records_to_csv(const std::vector<BerRecord>& records) {
    std::string out =
        "modulation,scenario,ebn0_db,demodulator,decoder,bits_counted,bit_errors,ber,seed\n";
    for (const BerRecord& r : records) {
        out += csv_field(r.modulation);
        out += ',';
        out += csv_field(r.scenario);
        out += ',';
        out += fmt_real(r.ebn0_db);
        out += ',';
        out += csv_field(r.demodulator);
        out += ',';
        out += csv_field(r.decoder);
        out += ',';
        out += std::to_string(r.bits_counted);
        out += ',';
        out += std::to_string(r.bit_errors);
        out += ',';
        out += fmt_real(r.ber);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

void write_csv(const std::vector<BerRecord>& records, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), "sweep: cannot open '" + path + "' for writing");
    const std::string csv = records_to_csv(records);
    os.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    require(static_cast<bool>(os), "sweep: write to '" + path + "' failed");
}

} // namespace linksim::sim
