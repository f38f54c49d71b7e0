#include "linksim/net/dataset.hpp"

#include "linksim/channel.hpp"
#include "linksim/net/model.hpp"

namespace linksim::net {

Dataset generate_dataset(const Constellation& c, const ChannelScenario& scenario,
                         const std::vector<double>& ebn0_list_db, int samples_per_ebn0,
                         int symbols_per_sample, std::uint64_t seed) {
    require(!ebn0_list_db.empty(), "dataset: ebn0 list must not be empty");
    require(samples_per_ebn0 >= 1, "dataset: samples_per_ebn0 must be >= 1");
    require(symbols_per_sample >= static_cast<int>(kMinInputSymbols),
            "dataset: symbols_per_sample must be >= " + std::to_string(kMinInputSymbols));

    Dataset ds;
    ds.modulation = c.mod;
    ds.scenario = scenario.str();
    ds.ebn0_list_db = ebn0_list_db;
    ds.symbols_per_sample = symbols_per_sample;
    ds.seed = seed;
    ds.samples.reserve(ebn0_list_db.size() * static_cast<std::size_t>(samples_per_ebn0));

    const std::size_t n_bits = static_cast<std::size_t>(symbols_per_sample) * c.k;
    Rng rng(derive_seed(seed, 0x6461'7461'7365'74ULL));
    for (std::size_t gi = 0; gi < ebn0_list_db.size(); ++gi) {
        const double ebn0 = ebn0_list_db[gi];
        const double sigma2 = sigma2_from_ebn0(ebn0, c.k, 1.0);
        for (int si = 0; si < samples_per_ebn0; ++si) {
            Dataset::Sample sample;
            sample.ebn0_db = ebn0;
            sample.sigma2 = sigma2;
            sample.bits.resize(n_bits);
            for (auto& b : sample.bits) b = static_cast<std::uint8_t>(rng.bit());
            sample.rx = scenario.transmit(modulate(sample.bits, c), sigma2, rng);
            ds.samples.push_back(std::move(sample));
        }
    }
    return ds;
}

} // namespace linksim::net
