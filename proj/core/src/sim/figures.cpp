#include "linksim/sim/figures.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "linksim/fec.hpp"
#include "linksim/net/checkpoint.hpp"

namespace fs = std::filesystem;

namespace linksim::sim {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string scenario_slug(const ChannelScenario& sc) {
    std::string out;
    for (char c : sc.str()) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out.push_back(c);
        } else if (!out.empty() && out.back() != '-') {
            out.push_back('-');
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

std::string grid_str(const std::vector<double>& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out += ',';
        out += fmt_real(grid[i]);
    }
    return out;
}

std::string recipe_canonical(const TrainRecipe& r) {
    return modulation_name(r.modulation) + "|" + r.scenario.str() + "|" + net::head_name(r.head) +
           "|" + grid_str(r.ebn0_grid_db) + "|" + std::to_string(r.samples_per_ebn0) + "x" +
           std::to_string(r.symbols_per_sample) + "|C" + std::to_string(r.hidden_channels) +
           "|b" + std::to_string(r.schedule.batch_size) + "|e" +
           std::to_string(r.schedule.max_epochs) + "|lr" + fmt_real(r.schedule.lr0) + "|h" +
           std::to_string(r.schedule.lr_halving_period) + "|s" + std::to_string(r.seed);
}

std::string fingerprint_hex(const TrainRecipe& r) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(recipe_canonical(r))));
    return buf;
}

std::vector<double> make_grid(double lo, double step, double hi) {
    std::vector<double> grid;
    for (double v = lo; v <= hi + step * 1e-9; v += step) grid.push_back(v);
    return grid;
}

std::vector<double> awgn_train_grid(Modulation m, bool paper) {
    const double hi = m == Modulation::Bpsk || m == Modulation::Qpsk ? 8.0
                      : m == Modulation::Qam16                       ? 12.0
                      : m == Modulation::Qam64                       ? 16.0
                                                                     : 20.0;
    if (paper) return make_grid(0.0, 1.0, hi);
    return make_grid(0.0, m == Modulation::Qam256 ? 4.0 : 2.0, hi);
}

struct Budget {
    long long floor = 100000;
    long long target = 500;
    long long cap = 2000000;
};

Budget figure_budget(const std::string& figure, bool paper) {
    if (paper) {
        Budget b{1000000, 1000, 100000000};
        if (figure == "fig4" || figure == "fig6") b.cap = 10000000;
        return b;
    }
    // fig4: the learned LPR sits 2-3 decades under the mismatched ExactLLR,
    // so its mid-grid points need a deep cap to reach the error target.
    if (figure == "fig4") return {100000, 500, 10000000};
    // fig6: at 30 Hz Doppler a burst sees an almost constant fade, so the
    // floor is what fixes the number of fade realizations per point
    // (1e6 bits = 250 bursts).
    if (figure == "fig6") return {1000000, 500, 8000000};
    return {100000, 500, 2000000};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), "figures: cannot open '" + path + "' for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    require(static_cast<bool>(os), "figures: write to '" + path + "' failed");
}

std::string recipe_manifest_block(const TrainRecipe& r, const std::string& path) {
    std::string out;
    out += "## model " + path + "\n";
    out += "modulation = " + modulation_name(r.modulation) + "\n";
    out += "scenario = " + r.scenario.str() + "\n";
    out += "head = " + net::head_name(r.head) + "\n";
    out += "train_ebn0_db = " + grid_str(r.ebn0_grid_db) + "\n";
    out += "samples_per_ebn0 = " + std::to_string(r.samples_per_ebn0) + "\n";
    out += "symbols_per_sample = " + std::to_string(r.symbols_per_sample) + "\n";
    out += "hidden_channels = " + std::to_string(r.hidden_channels) + "\n";
    out += "batch_size = " + std::to_string(r.schedule.batch_size) + "\n";
    out += "max_epochs = " + std::to_string(r.schedule.max_epochs) + "\n";
    out += "lr0 = " + fmt_real(r.schedule.lr0) + "\n";
    out += "lr_halving_period = " + std::to_string(r.schedule.lr_halving_period) + "\n";
    out += "train_seed = " + std::to_string(r.seed) + "\n";
    return out;
}

} // namespace

TrainRecipe figure_train_recipe(Modulation m, const ChannelScenario& scenario, net::HeadKind head,
                                const std::string& scale, std::uint64_t seed) {
    require(scale == "desk" || scale == "paper", "figures: scale must be desk or paper");
    const bool paper = scale == "paper";

    TrainRecipe r;
    r.modulation = m;
    r.scenario = scenario;
    r.head = head;
    switch (scenario.kind) {
    case ChannelScenario::Kind::Awgn:
        r.ebn0_grid_db = awgn_train_grid(m, paper);
        break;
    case ChannelScenario::Kind::AwgnCfo:
        r.ebn0_grid_db = paper ? awgn_train_grid(m, true) : make_grid(4.0, 2.0, 14.0);
        break;
    case ChannelScenario::Kind::Aggn:
        r.ebn0_grid_db = paper ? awgn_train_grid(m, true) : make_grid(0.0, 2.0, 12.0);
        break;
    case ChannelScenario::Kind::RayleighAwgn:
        r.ebn0_grid_db = paper ? make_grid(10.0, 2.0, 30.0) : make_grid(10.0, 5.0, 30.0);
        break;
    }

    const bool fading = scenario.uses_fading();
    const bool heavy = m == Modulation::Qam64 || m == Modulation::Qam256;
    r.samples_per_ebn0 = paper ? 100000 : (fading ? 320 : heavy ? 2500 : 5000);
    // Fading samples must span a full burst: the LMS taps freeze after the
    // prefix, so the channel drift the demodulator meets late in a burst only
    // shows up in training data that extends equally far past the prefix.
    r.symbols_per_sample = paper ? 100 : (fading ? 1998 : 48);
    r.hidden_channels = paper ? 64 : 16;
    r.schedule.batch_size = fading && !paper ? 32 : 128;
    r.schedule.lr0 = 3e-3;
    r.schedule.lr_halving_period = 3;
    r.schedule.max_epochs = paper ? 15 : (fading ? 6 : m == Modulation::Qam256 ? 3 : 4);
    r.seed = derive_seed(seed, fnv1a(modulation_name(m) + "|" + scenario.str() + "|" +
                                     net::head_name(head) + "|" + scale));
    r.schedule.seed = derive_seed(r.seed, 3);
    return r;
}

std::string ensure_model(const TrainRecipe& recipe, const std::string& model_dir) {
    fs::create_directories(model_dir);
    const std::string name = modulation_name(recipe.modulation) + "_" +
                             scenario_slug(recipe.scenario) + "_" + net::head_name(recipe.head) +
                             "_" + fingerprint_hex(recipe) + ".ckpt";
    const std::string path = (fs::path(model_dir) / name).string();
    if (fs::exists(path)) {
        const net::ModelConfig cfg = net::read_checkpoint_config(path);
        require(cfg.modulation == recipe.modulation && cfg.head == recipe.head,
                "figures: cached checkpoint '" + path + "' does not match its recipe");
        return path;
    }

    std::fprintf(stderr, "[linksim] training %s / %s (%s head): %d x %d samples of %d symbols, C=%d, %d epochs\n",
                 modulation_name(recipe.modulation).c_str(), recipe.scenario.str().c_str(),
                 net::head_name(recipe.head).c_str(),
                 static_cast<int>(recipe.ebn0_grid_db.size()), recipe.samples_per_ebn0,
                 recipe.symbols_per_sample, recipe.hidden_channels, recipe.schedule.max_epochs);

    const Constellation c = build_constellation(recipe.modulation);
    const net::Dataset ds =
        net::generate_dataset(c, recipe.scenario, recipe.ebn0_grid_db, recipe.samples_per_ebn0,
                              recipe.symbols_per_sample, derive_seed(recipe.seed, 1));
    net::DemodNetModel model = net::build_demodnet(recipe.modulation, recipe.hidden_channels,
                                                   derive_seed(recipe.seed, 2), recipe.head);
    const net::TrainResult result = recipe.head == net::HeadKind::Sigmoid
                                        ? net::train(model, ds, recipe.schedule)
                                        : net::train_llrnet(model, ds, recipe.schedule);
    require(!result.diverged, "figures: " + result.diagnostic);
    std::fprintf(stderr, "[linksim]   trained; final epoch loss %.6g\n",
                 result.epoch_loss.back());

    const std::string tmp = path + ".tmp";
    net::save_checkpoint(model, tmp);
    fs::rename(tmp, path);
    return path;
}

FigureResult reproduce_figure(const FigureRequest& req) {
    require(req.scale == "desk" || req.scale == "paper",
            "figures: scale must be desk or paper, got '" + req.scale + "'");
    if (req.figure == "fig5b") throw Error("out of scope: turbo code");
    const bool known = req.figure == "fig2" || req.figure == "fig3" || req.figure == "fig4" ||
                       req.figure == "fig5a" || req.figure == "fig6";
    require(known, "figures: unknown figure '" + req.figure +
                       "' (expected fig2, fig3, fig4, fig5a or fig6)");

    const bool paper = req.scale == "paper";
    const Budget budget = figure_budget(req.figure, paper);
    const fs::path dir = fs::path(req.out_dir) / req.figure;
    fs::create_directories(dir);

    FigureResult out;
    std::string manifest = "# linksim figure manifest\n";
    manifest += "figure = " + req.figure + "\n";
    manifest += "scale = " + req.scale + "\n";
    manifest += "seed = " + std::to_string(req.seed) + "\n";

    struct SweepPlan {
        SweepConfig cfg;
        std::vector<TrainRecipe> recipes; // models this sweep depends on
    };
    std::vector<SweepPlan> plans;

    auto base_cfg = [&](Modulation m, const ChannelScenario& sc) {
        SweepConfig cfg;
        cfg.modulation = m;
        cfg.scenario = sc;
        cfg.bits_per_point = budget.floor;
        cfg.target_errors = budget.target;
        cfg.max_bits_per_point = budget.cap;
        cfg.seed = derive_seed(req.seed, fnv1a(req.figure + "|" + modulation_name(m)));
        return cfg;
    };

    const ChannelScenario awgn = ChannelScenario::parse("awgn");

    if (req.figure == "fig2") {
        for (Modulation m : {Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16,
                             Modulation::Qam64, Modulation::Qam256}) {
            SweepPlan plan;
            plan.cfg = base_cfg(m, awgn);
            plan.cfg.ebn0_grid_db = awgn_train_grid(m, paper);
            plan.cfg.demodulators = {Demod::MinDistance, Demod::DemodnetLpr};
            plan.cfg.burst_symbols = 1008;
            plan.recipes.push_back(
                figure_train_recipe(m, awgn, net::HeadKind::Sigmoid, req.scale, kTrainMaster));
            plans.push_back(std::move(plan));
        }
    } else if (req.figure == "fig3") {
        for (Modulation m : {Modulation::Bpsk, Modulation::Qam16, Modulation::Qam64}) {
            SweepPlan plan;
            plan.cfg = base_cfg(m, awgn);
            if (m == Modulation::Bpsk)
                plan.cfg.ebn0_grid_db = paper ? make_grid(0.0, 0.5, 5.0)
                                              : std::vector<double>{0, 1, 1.5, 2, 2.5, 3, 3.5, 4, 5};
            else if (m == Modulation::Qam16)
                plan.cfg.ebn0_grid_db = paper
                                            ? make_grid(2.0, 0.5, 8.0)
                                            : std::vector<double>{2, 3, 4, 4.5, 5, 5.5, 6, 6.5, 7, 8};
            else
                plan.cfg.ebn0_grid_db =
                    paper ? make_grid(6.0, 0.5, 12.0)
                          : std::vector<double>{6, 7, 8, 8.5, 9, 9.5, 10, 10.5, 11, 12};
            plan.cfg.demodulators = {Demod::ExactLlr, Demod::DemodnetLpr};
            plan.cfg.coded = true;
            plan.cfg.info_bits = 1002;
            plan.recipes.push_back(
                figure_train_recipe(m, awgn, net::HeadKind::Sigmoid, req.scale, kTrainMaster));
            plans.push_back(std::move(plan));
        }
    } else if (req.figure == "fig4") {
        const ChannelScenario sc = ChannelScenario::parse("awgn+cfo(0.005)");
        SweepPlan plan;
        plan.cfg = base_cfg(Modulation::Qam16, sc);
        plan.cfg.ebn0_grid_db = paper ? make_grid(4.0, 1.0, 14.0) : make_grid(4.0, 2.0, 14.0);
        plan.cfg.demodulators = {Demod::ExactLlr, Demod::DemodnetLpr};
        plan.cfg.coded = true;
        plan.cfg.info_bits = 90; // 192 coded bits = 48 16QAM symbols per burst
        plan.recipes.push_back(
            figure_train_recipe(Modulation::Qam16, sc, net::HeadKind::Sigmoid, req.scale,
                                kTrainMaster));
        plans.push_back(std::move(plan));
    } else if (req.figure == "fig5a") {
        const ChannelScenario sc = ChannelScenario::parse("aggn(0,1,1)");
        SweepPlan plan;
        plan.cfg = base_cfg(Modulation::Qam16, sc);
        plan.cfg.ebn0_grid_db = paper ? make_grid(0.0, 1.0, 12.0) : make_grid(0.0, 2.0, 12.0);
        plan.cfg.demodulators = {Demod::ExactLlr, Demod::DemodnetLpr, Demod::Llrnet};
        plan.cfg.coded = true;
        plan.cfg.info_bits = 1002;
        plan.recipes.push_back(figure_train_recipe(Modulation::Qam16, sc, net::HeadKind::Sigmoid,
                                                   req.scale, kTrainMaster));
        plan.recipes.push_back(figure_train_recipe(Modulation::Qam16, sc, net::HeadKind::Linear,
                                                   req.scale, kTrainMaster));
        plans.push_back(std::move(plan));
    } else { // fig6
        const ChannelScenario sc = ChannelScenario::parse("rayleigh(30,1e6)+awgn");
        std::vector<Modulation> mods = {Modulation::Qam16};
        if (paper) mods.push_back(Modulation::Qam64);
        for (Modulation m : mods) {
            SweepPlan plan;
            plan.cfg = base_cfg(m, sc);
            plan.cfg.ebn0_grid_db = paper ? make_grid(10.0, 2.0, 30.0) : make_grid(10.0, 5.0, 30.0);
            plan.cfg.demodulators = {Demod::ExactLlr, Demod::DemodnetLpr};
            plan.cfg.coded = true;
            plan.cfg.info_bits = 3990; // 7992 coded bits fill 16QAM and 64QAM bursts exactly
            plan.cfg.equalizer = "lms";
            plan.recipes.push_back(
                figure_train_recipe(m, sc, net::HeadKind::Sigmoid, req.scale, kTrainMaster));
            plans.push_back(std::move(plan));
        }
    }

    // Train (or load) every model first so the manifest lists them up front.
    std::vector<std::string> model_blocks;
    for (SweepPlan& plan : plans) {
        for (const TrainRecipe& recipe : plan.recipes) {
            const std::string path = ensure_model(recipe, req.model_dir);
            if (recipe.head == net::HeadKind::Linear)
                plan.cfg.llrnet_checkpoint = path;
            else
                plan.cfg.checkpoint = path;
            const std::string block = recipe_manifest_block(recipe, path);
            bool seen = false;
            for (const std::string& b : model_blocks) seen = seen || b == block;
            if (!seen) model_blocks.push_back(block);
        }
    }
    for (const std::string& b : model_blocks) manifest += "\n" + b;

    for (SweepPlan& plan : plans) {
        const std::string mod = modulation_name(plan.cfg.modulation);
        std::fprintf(stderr, "[linksim] sweeping %s / %s (%s)\n", mod.c_str(),
                     plan.cfg.scenario.str().c_str(), req.figure.c_str());
        const std::vector<BerRecord> records = run_sweep(plan.cfg);
        for (Demod d : plan.cfg.demodulators) {
            std::vector<BerRecord> filtered;
            for (const BerRecord& r : records)
                if (r.demodulator == demod_name(d)) filtered.push_back(r);
            const std::string path = (dir / (mod + "_" + demod_name(d) + ".csv")).string();
            write_csv(filtered, path);
            out.csv_paths.push_back(path);
        }
        manifest += "\n## sweep " + mod + "\n" + format_sweep_config(plan.cfg);

        if (req.figure == "fig2") {
            std::string theory = "ebn0_db,ber\n";
            for (double e : plan.cfg.ebn0_grid_db)
                theory += fmt_real(e) + "," + fmt_real(theoretical_ber(plan.cfg.modulation, e)) +
                          "\n";
            const std::string tpath = (dir / (mod + "_theory.csv")).string();
            write_text(tpath, theory);
            out.csv_paths.push_back(tpath);
        }
    }

    out.manifest_path = (dir / "manifest.txt").string();
    write_text(out.manifest_path, manifest);
    return out;
}

} // namespace linksim::sim
