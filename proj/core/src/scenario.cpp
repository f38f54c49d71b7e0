#include "linksim/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

namespace linksim {

namespace {

std::string strip_spaces(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

// Splits "name(a,b,c)" into name and args; bare "name" yields no args.
bool split_call(const std::string& s, std::string& name, std::vector<double>& args,
                std::string& err) {
    args.clear();
    const std::size_t open = s.find('(');
    if (open == std::string::npos) {
        name = s;
        return true;
    }
    if (s.back() != ')') {
        err = "missing closing ')' in '" + s + "'";
        return false;
    }
    name = s.substr(0, open);
    std::string body = s.substr(open + 1, s.size() - open - 2);
    if (body.empty()) {
        err = "empty argument list in '" + s + "'";
        return false;
    }
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        const std::string tok = body.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            args.push_back(v);
        } catch (const std::exception&) {
            err = "bad numeric argument '" + tok + "' in '" + s + "'";
            return false;
        }
        pos = comma + 1;
        if (comma == body.size()) break;
    }
    return true;
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

ChannelScenario ChannelScenario::parse(const std::string& text) {
    const std::string s = strip_spaces(text);
    require(!s.empty(), "scenario: empty string");

    ChannelScenario sc;
    std::string name, err;
    std::vector<double> args;

    if (s == "awgn") {
        sc.kind = Kind::Awgn;
        return sc;
    }

    // The joining '+' sits at paren depth 0; a '+' inside an argument list
    // (e.g. the exponent in "rayleigh(30,1e+06)") must not split the string.
    std::size_t plus = std::string::npos;
    int depth = 0;
    for (std::size_t i = 0; i < s.size() && plus == std::string::npos; ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == '+' && depth == 0) plus = i;
    }
    if (plus == std::string::npos) {
        require(split_call(s, name, args, err), "scenario: " + err);
        require(name == "aggn", "scenario: unknown scenario '" + text + "'");
        require(args.size() == 3, "scenario: aggn takes (mu,gamma,rho), got " +
                                      std::to_string(args.size()) + " arguments");
        sc.kind = Kind::Aggn;
        sc.mu = args[0];
        sc.gamma = args[1];
        sc.rho = args[2];
        require(sc.gamma > 0.0, "scenario: aggn gamma must be > 0");
        require(sc.rho > 0.0, "scenario: aggn rho must be > 0");
        return sc;
    }

    const std::string left = s.substr(0, plus);
    const std::string right = s.substr(plus + 1);

    if (left == "awgn") {
        require(split_call(right, name, args, err), "scenario: " + err);
        require(name == "cfo" && args.size() == 1,
                "scenario: expected awgn+cfo(delta_f), got '" + text + "'");
        sc.kind = Kind::AwgnCfo;
        sc.delta_f = args[0];
        return sc;
    }

    require(right == "awgn", "scenario: unknown scenario '" + text + "'");
    require(split_call(left, name, args, err), "scenario: " + err);
    require(name == "rayleigh" && args.size() == 2,
            "scenario: expected rayleigh(max_doppler_hz,symbol_rate_hz)+awgn, got '" + text + "'");
    sc.kind = Kind::RayleighAwgn;
    sc.fading.max_doppler_hz = args[0];
    sc.fading.symbol_rate_hz = args[1];
    require(sc.fading.max_doppler_hz >= 0.0, "scenario: max_doppler_hz must be >= 0");
    require(sc.fading.symbol_rate_hz > 0.0, "scenario: symbol_rate_hz must be > 0");
    require(sc.fading.normalized_doppler() < 0.5, "scenario: normalized Doppler must be < 0.5");
    return sc;
}

std::string ChannelScenario::str() const {
    switch (kind) {
    case Kind::Awgn:
        return "awgn";
    case Kind::Aggn:
        return "aggn(" + fmt_real(mu) + "," + fmt_real(gamma) + "," + fmt_real(rho) + ")";
    case Kind::AwgnCfo:
        return "awgn+cfo(" + fmt_real(delta_f) + ")";
    case Kind::RayleighAwgn:
        return "rayleigh(" + fmt_real(fading.max_doppler_hz) + "," +
               fmt_real(fading.symbol_rate_hz) + ")+awgn";
    }
    throw Error("scenario: unreachable kind");
}

ComplexSequence ChannelScenario::transmit(const ComplexSequence& payload, double sigma2,
                                          Rng& rng) const {
    require(sigma2 > 0.0, "scenario: sigma2 must be > 0");
    switch (kind) {
    case Kind::Awgn:
        return add_awgn(payload, sigma2, rng);

    case Kind::Aggn: {
        // Shape comes from (mu, gamma, rho); power tracks the Eb/N0 axis by
        // scaling each real dimension with sqrt(sigma2/2).
        const double s = std::sqrt(sigma2 / 2.0);
        const std::vector<double> wi = sample_aggn(payload.size(), mu, gamma, rho, rng);
        const std::vector<double> wq = sample_aggn(payload.size(), mu, gamma, rho, rng);
        ComplexSequence out(payload.size());
        for (std::size_t n = 0; n < payload.size(); ++n)
            out[n] = payload[n] + cplx{s * wi[n], s * wq[n]};
        return out;
    }

    case Kind::AwgnCfo:
        return add_awgn(apply_frequency_offset(payload, delta_f), sigma2, rng);

    case Kind::RayleighAwgn: {
        const ComplexSequence train = lms_training_sequence();
        ComplexSequence burst;
        burst.reserve(train.size() + payload.size());
        burst.insert(burst.end(), train.begin(), train.end());
        burst.insert(burst.end(), payload.begin(), payload.end());
        const FadedSignal faded = rayleigh_flat_fade(burst, fading, rng);
        const ComplexSequence rx = add_awgn(faded.faded, sigma2, rng);
        LmsResult eq = lms_equalize(rx, train);
        return std::move(eq.payload);
    }
    }
    throw Error("scenario: unreachable kind");
}

} // namespace linksim
