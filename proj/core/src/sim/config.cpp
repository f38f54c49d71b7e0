#include "linksim/sim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace linksim::sim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double to_real(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        require(used == s.size(), s);
        return v;
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "': bad number '" + s + "'");
    }
}

long long to_int(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        require(used == s.size(), s);
        return v;
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "': bad integer '" + s + "'");
    }
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

Demod demod_from_name(const std::string& name) {
    if (name == "min-distance") return Demod::MinDistance;
    if (name == "exact-llr") return Demod::ExactLlr;
    if (name == "maxlog-llr") return Demod::MaxlogLlr;
    if (name == "demodnet-lpr") return Demod::DemodnetLpr;
    if (name == "llrnet") return Demod::Llrnet;
    throw Error("config: unknown demodulator '" + name +
                "' (expected min-distance, exact-llr, maxlog-llr, demodnet-lpr or llrnet)");
}

std::string demod_name(Demod d) {
    switch (d) {
    case Demod::MinDistance: return "min-distance";
    case Demod::ExactLlr: return "exact-llr";
    case Demod::MaxlogLlr: return "maxlog-llr";
    case Demod::DemodnetLpr: return "demodnet-lpr";
    case Demod::Llrnet: return "llrnet";
    }
    throw Error("config: unreachable demodulator kind");
}

std::vector<double> parse_grid(const std::string& text) {
    const std::string s = trim(text);
    require(!s.empty(), "config: empty Eb/N0 grid");
    std::vector<double> grid;
    if (s.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split_list(s, ':');
        require(parts.size() == 3, "config: grid range must be lo:step:hi, got '" + s + "'");
        const double lo = to_real(parts[0], "ebn0_db");
        const double step = to_real(parts[1], "ebn0_db");
        const double hi = to_real(parts[2], "ebn0_db");
        require(step > 0.0, "config: grid step must be > 0");
        require(hi >= lo, "config: grid hi must be >= lo");
        for (double v = lo; v <= hi + step * 1e-9; v += step) grid.push_back(v);
    } else {
        for (const std::string& tok : split_list(s, ','))
            grid.push_back(to_real(tok, "ebn0_db"));
    }
    return grid;
}

bool SweepConfig::wants(Demod d) const {
    for (Demod have : demodulators)
        if (have == d) return true;
    return false;
}

void SweepConfig::validate() const {
    require(!ebn0_grid_db.empty(), "config: ebn0_db grid is empty");
    require(!demodulators.empty(), "config: demodulators list is empty");
    for (std::size_t i = 0; i < demodulators.size(); ++i)
        for (std::size_t j = i + 1; j < demodulators.size(); ++j)
            require(demodulators[i] != demodulators[j],
                    "config: duplicate demodulator '" + demod_name(demodulators[i]) + "'");
    require(bits_per_point >= 10000, "config: bits_per_point must be >= 10000, got " +
                                         std::to_string(bits_per_point));
    require(target_errors >= 0, "config: target_errors must be >= 0");
    require(max_bits_per_point == 0 || max_bits_per_point >= bits_per_point,
            "config: max_bits_per_point must be 0 (auto) or >= bits_per_point");

    const Constellation c = build_constellation(modulation);
    if (coded) {
        require(info_bits >= 1, "config: info_bits must be >= 1");
        const long long coded_bits = 2LL * (info_bits + 6);
        require(coded_bits % c.k == 0, "config: coded burst of " + std::to_string(coded_bits) +
                                           " bits does not fill whole " + c.name + " symbols");
    } else {
        require(burst_symbols >= 1, "config: burst_symbols must be >= 1");
    }

    require(equalizer == "auto" || equalizer == "lms" || equalizer == "none",
            "config: equalizer must be auto, lms or none");
    if (equalizer == "lms")
        require(scenario.uses_fading(),
                "config: invalid scenario combination — the lms equalizer requires the "
                "rayleigh fading scenario");
    if (scenario.uses_fading())
        require(equalizer != "none",
                "config: the rayleigh fading scenario requires the lms equalizer");

    if (wants(Demod::DemodnetLpr))
        require(!checkpoint.empty(), "config: demodnet-lpr requires 'checkpoint'");
    if (wants(Demod::Llrnet))
        require(!llrnet_checkpoint.empty(), "config: llrnet requires 'llrnet_checkpoint'");
}

SweepConfig parse_sweep_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        require(eq != std::string::npos,
                "config: line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!key.empty(), "config: line " + std::to_string(lineno) + ": empty key");
        require(kv.emplace(key, value).second, "config: duplicate key '" + key + "'");
    }

    SweepConfig cfg;
    auto take = [&kv](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::string();
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    std::string v = take("modulation");
    require(!v.empty(), "config: missing required key 'modulation'");
    cfg.modulation = modulation_from_name(v);

    v = take("scenario");
    require(!v.empty(), "config: missing required key 'scenario'");
    cfg.scenario = ChannelScenario::parse(v);

    v = take("ebn0_db");
    require(!v.empty(), "config: missing required key 'ebn0_db'");
    cfg.ebn0_grid_db = parse_grid(v);

    v = take("demodulators");
    require(!v.empty(), "config: missing required key 'demodulators'");
    for (const std::string& tok : split_list(v, ','))
        cfg.demodulators.push_back(demod_from_name(tok));

    v = take("coding");
    if (!v.empty()) {
        if (v == "none") {
            cfg.coded = false;
        } else if (v == "conv(171,133)") {
            cfg.coded = true;
        } else {
            throw Error("config: coding must be 'none' or 'conv(171,133)', got '" + v + "'");
        }
    }

    if (v = take("bits_per_point"); !v.empty()) cfg.bits_per_point = to_int(v, "bits_per_point");
    if (v = take("target_errors"); !v.empty()) cfg.target_errors = to_int(v, "target_errors");
    if (v = take("max_bits_per_point"); !v.empty())
        cfg.max_bits_per_point = to_int(v, "max_bits_per_point");
    if (v = take("seed"); !v.empty()) cfg.seed = static_cast<std::uint64_t>(to_int(v, "seed"));
    if (v = take("burst_symbols"); !v.empty())
        cfg.burst_symbols = static_cast<int>(to_int(v, "burst_symbols"));
    if (v = take("info_bits"); !v.empty()) cfg.info_bits = static_cast<int>(to_int(v, "info_bits"));
    if (v = take("equalizer"); !v.empty()) cfg.equalizer = v;
    cfg.checkpoint = take("checkpoint");
    cfg.llrnet_checkpoint = take("llrnet_checkpoint");
    cfg.output = take("output");

    if (!kv.empty()) throw Error("config: unknown key '" + kv.begin()->first + "'");
    cfg.validate();
    return cfg;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), "config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_sweep_config_text(ss.str());
}

std::string format_sweep_config(const SweepConfig& cfg) {
    std::ostringstream os;
    os << "modulation = " << modulation_name(cfg.modulation) << "\n";
    os << "scenario = " << cfg.scenario.str() << "\n";
    os << "ebn0_db = ";
    for (std::size_t i = 0; i < cfg.ebn0_grid_db.size(); ++i)
        os << (i ? "," : "") << fmt_real(cfg.ebn0_grid_db[i]);
    os << "\n";
    os << "demodulators = ";
    for (std::size_t i = 0; i < cfg.demodulators.size(); ++i)
        os << (i ? "," : "") << demod_name(cfg.demodulators[i]);
    os << "\n";
    os << "coding = " << (cfg.coded ? "conv(171,133)" : "none") << "\n";
    os << "bits_per_point = " << cfg.bits_per_point << "\n";
    os << "target_errors = " << cfg.target_errors << "\n";
    os << "max_bits_per_point = " << cfg.max_bits_per_point << "\n";
    os << "seed = " << cfg.seed << "\n";
    if (cfg.coded)
        os << "info_bits = " << cfg.info_bits << "\n";
    else
        os << "burst_symbols = " << cfg.burst_symbols << "\n";
    os << "equalizer = " << cfg.equalizer << "\n";
    if (!cfg.checkpoint.empty()) os << "checkpoint = " << cfg.checkpoint << "\n";
    if (!cfg.llrnet_checkpoint.empty()) os << "llrnet_checkpoint = " << cfg.llrnet_checkpoint << "\n";
    if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
    return os.str();
}

} // namespace linksim::sim
