// linksim — link-level BER simulation with learned soft demodulation.
//
// Subcommands: train, evaluate, sweep, reproduce, dump-llr, info.
// Exit 0 on success; nonzero with a one-line `error: ...` otherwise.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "linksim/channel.hpp"
#include "linksim/fec.hpp"
#include "linksim/llr.hpp"
#include "linksim/net/checkpoint.hpp"
#include "linksim/net/train.hpp"
#include "linksim/sim/config.hpp"
#include "linksim/sim/figures.hpp"
#include "linksim/sim/sweep.hpp"

namespace {

using namespace linksim;

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_or_print(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), "cannot open '" + path + "' for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    require(static_cast<bool>(os), "write to '" + path + "' failed");
}

struct TrainArgs {
    std::string modulation;
    std::string scenario = "awgn";
    std::string head = "sigmoid";
    std::string scale = "desk";
    std::string output;
    std::string grid;
    int samples = 0, symbols = 0, channels = 0, epochs = 0, batch = 0, halving = 0;
    double lr0 = 0.0;
    std::uint64_t seed = 1;
};

void run_train(const TrainArgs& a) {
    require(a.head == "sigmoid" || a.head == "linear", "head must be sigmoid or linear");
    const net::HeadKind head =
        a.head == "sigmoid" ? net::HeadKind::Sigmoid : net::HeadKind::Linear;
    sim::TrainRecipe recipe = sim::figure_train_recipe(
        modulation_from_name(a.modulation), ChannelScenario::parse(a.scenario), head, a.scale,
        a.seed);
    if (!a.grid.empty()) recipe.ebn0_grid_db = sim::parse_grid(a.grid);
    if (a.samples > 0) recipe.samples_per_ebn0 = a.samples;
    if (a.symbols > 0) recipe.symbols_per_sample = a.symbols;
    if (a.channels > 0) recipe.hidden_channels = a.channels;
    if (a.epochs > 0) recipe.schedule.max_epochs = a.epochs;
    if (a.batch > 0) recipe.schedule.batch_size = a.batch;
    if (a.halving > 0) recipe.schedule.lr_halving_period = a.halving;
    if (a.lr0 > 0.0) recipe.schedule.lr0 = a.lr0;

    const Constellation c = build_constellation(recipe.modulation);
    const net::Dataset ds = net::generate_dataset(c, recipe.scenario, recipe.ebn0_grid_db,
                                                  recipe.samples_per_ebn0,
                                                  recipe.symbols_per_sample,
                                                  derive_seed(recipe.seed, 1));
    net::DemodNetModel model = net::build_demodnet(recipe.modulation, recipe.hidden_channels,
                                                   derive_seed(recipe.seed, 2), recipe.head);
    const net::TrainResult result = head == net::HeadKind::Sigmoid
                                        ? net::train(model, ds, recipe.schedule)
                                        : net::train_llrnet(model, ds, recipe.schedule);
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
        std::fprintf(stderr, "epoch %zu/%d: loss %.6g (lr %.6g)\n", e + 1,
                     recipe.schedule.max_epochs, result.epoch_loss[e],
                     net::lr_at_epoch(recipe.schedule, static_cast<int>(e + 1)));
    require(!result.diverged, result.diagnostic);
    net::save_checkpoint(model, a.output);
    std::cout << a.output << "\n";
}

struct EvalArgs {
    std::string checkpoint;
    std::string scenario = "awgn";
    std::string grid;
    std::string with; // extra demodulators, comma list
    std::string output;
    bool coded = false;
    long long bits = 100000, errors = 500, max_bits = 0;
    int burst_symbols = 1008, info_bits = 1002;
    std::uint64_t seed = 1;
};

void run_evaluate(const EvalArgs& a) {
    const net::ModelConfig mc = net::read_checkpoint_config(a.checkpoint);
    sim::SweepConfig cfg;
    cfg.modulation = mc.modulation;
    cfg.scenario = ChannelScenario::parse(a.scenario);
    cfg.ebn0_grid_db = sim::parse_grid(a.grid);
    if (mc.head == net::HeadKind::Sigmoid) {
        cfg.demodulators = {sim::Demod::DemodnetLpr};
        cfg.checkpoint = a.checkpoint;
    } else {
        cfg.demodulators = {sim::Demod::Llrnet};
        cfg.llrnet_checkpoint = a.checkpoint;
    }
    if (!a.with.empty()) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) cfg.demodulators.push_back(sim::demod_from_name(cur));
            cur.clear();
        };
        for (char ch : a.with) {
            if (ch == ',')
                flush();
            else if (!std::isspace(static_cast<unsigned char>(ch)))
                cur.push_back(ch);
        }
        flush();
    }
    cfg.coded = a.coded;
    cfg.bits_per_point = a.bits;
    cfg.target_errors = a.errors;
    cfg.max_bits_per_point = a.max_bits;
    cfg.burst_symbols = a.burst_symbols;
    cfg.info_bits = a.info_bits;
    cfg.seed = a.seed;
    write_or_print(sim::records_to_csv(sim::run_sweep(cfg)), a.output);
}

void run_sweep_cmd(const std::string& config_path, const std::string& output_override) {
    const sim::SweepConfig cfg = sim::parse_sweep_config_file(config_path);
    const std::string out = output_override.empty() ? cfg.output : output_override;
    write_or_print(sim::records_to_csv(sim::run_sweep(cfg)), out);
}

void run_reproduce(const sim::FigureRequest& req) {
    const sim::FigureResult res = sim::reproduce_figure(req);
    for (const std::string& p : res.csv_paths) std::cout << p << "\n";
    std::cout << res.manifest_path << "\n";
}

struct DumpLlrArgs {
    std::string modulation;
    double ebn0_db = 6.0;
    int symbols = 100;
    std::uint64_t seed = 1;
    std::string output;
};

void run_dump_llr(const DumpLlrArgs& a) {
    const Constellation c = build_constellation(a.modulation);
    const double sigma2 = sigma2_from_ebn0(a.ebn0_db, c.k, 1.0);
    Rng rng(derive_seed(a.seed, 0xd11aULL));
    BitStream bits(static_cast<std::size_t>(a.symbols) * c.k);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
    const ComplexSequence rx = add_awgn(modulate(bits, c), sigma2, rng);

    std::string out = "symbol_index,bit_index,re,im,llr_exact,llr_maxlog\n";
    for (std::size_t s = 0; s < rx.size(); ++s) {
        const std::vector<double> ze = exact_llr(rx[s], c, sigma2);
        const std::vector<double> zm = maxlog_llr(rx[s], c, sigma2);
        for (int i = 0; i < c.k; ++i) {
            out += std::to_string(s) + "," + std::to_string(i) + "," + fmt_real(rx[s].real()) +
                   "," + fmt_real(rx[s].imag()) + "," + fmt_real(ze[static_cast<std::size_t>(i)]) +
                   "," + fmt_real(zm[static_cast<std::size_t>(i)]) + "\n";
        }
    }
    write_or_print(out, a.output);
}

void run_info(const std::string& path) {
    net::DemodNetModel model = net::load_checkpoint(path);
    const net::ModelConfig& cfg = model.config();
    std::cout << "checkpoint: " << path << "\n";
    std::cout << "modulation: " << modulation_name(cfg.modulation) << " (k=" << model.k() << ")\n";
    std::cout << "head: " << net::head_name(cfg.head) << "\n";
    std::cout << "hidden_channels: " << cfg.hidden_channels << "\n";
    std::cout << "hidden_kernel: " << cfg.hidden_kernel << "\n";
    std::cout << "hidden_blocks: " << cfg.n_hidden_blocks << "\n";
    std::cout << "parameters: " << model.n_params() << "\n";
    std::cout << net::format_ops(net::count_ops(model));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-level BER simulation with learned soft demodulation"};
    app.require_subcommand(1);

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Train a demodulator model");
    train->add_option("-m,--modulation", train_args.modulation, "bpsk|qpsk|qam16|qam64|qam256")
        ->required();
    train->add_option("-s,--scenario", train_args.scenario, "channel scenario (default awgn)");
    train->add_option("--head", train_args.head, "sigmoid (DemodNet) or linear (LLR regressor)");
    train->add_option("--scale", train_args.scale, "desk|paper recipe defaults");
    train->add_option("-o,--output", train_args.output, "checkpoint path")->required();
    train->add_option("--train-ebn0", train_args.grid, "training grid, lo:step:hi or list");
    train->add_option("--samples", train_args.samples, "samples per Eb/N0");
    train->add_option("--symbols", train_args.symbols, "symbols per sample");
    train->add_option("--channels", train_args.channels, "hidden channel count C");
    train->add_option("--epochs", train_args.epochs, "max epochs");
    train->add_option("--batch", train_args.batch, "mini-batch size");
    train->add_option("--lr0", train_args.lr0, "initial learning rate");
    train->add_option("--halving", train_args.halving, "epochs between lr halvings");
    train->add_option("--seed", train_args.seed, "master seed");
    train->callback([&] { run_train(train_args); });

    EvalArgs eval_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Measure BER of a trained model");
    evaluate->add_option("-c,--checkpoint", eval_args.checkpoint, "model checkpoint")->required();
    evaluate->add_option("-s,--scenario", eval_args.scenario, "channel scenario");
    evaluate->add_option("-g,--ebn0", eval_args.grid, "Eb/N0 grid, lo:step:hi or list")
        ->required();
    evaluate->add_flag("--coded", eval_args.coded, "conv(171,133) + soft Viterbi");
    evaluate->add_option("--with", eval_args.with, "extra demodulators, comma list");
    evaluate->add_option("--bits", eval_args.bits, "bit floor per point");
    evaluate->add_option("--errors", eval_args.errors, "target error count per point");
    evaluate->add_option("--max-bits", eval_args.max_bits, "bit cap per point (0 = 10x floor)");
    evaluate->add_option("--burst-symbols", eval_args.burst_symbols, "uncoded burst length");
    evaluate->add_option("--info-bits", eval_args.info_bits, "coded info bits per burst");
    evaluate->add_option("--seed", eval_args.seed, "master seed");
    evaluate->add_option("-o,--output", eval_args.output, "CSV path (default stdout)");
    evaluate->callback([&] { run_evaluate(eval_args); });

    std::string sweep_config, sweep_output;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep from a config file");
    sweep->add_option("config", sweep_config, "key = value config file")->required();
    sweep->add_option("-o,--output", sweep_output, "CSV path override");
    sweep->callback([&] { run_sweep_cmd(sweep_config, sweep_output); });

    sim::FigureRequest fig_req;
    CLI::App* reproduce = app.add_subcommand("reproduce", "Reproduce a figure's BER curves");
    reproduce->add_option("figure", fig_req.figure, "fig2|fig3|fig4|fig5a|fig6")->required();
    reproduce->add_option("--scale", fig_req.scale, "desk|paper");
    reproduce->add_option("--out-dir", fig_req.out_dir, "output directory");
    reproduce->add_option("--model-dir", fig_req.model_dir, "checkpoint cache directory");
    reproduce->add_option("--seed", fig_req.seed, "master seed");
    reproduce->callback([&] { run_reproduce(fig_req); });

    DumpLlrArgs dump_args;
    CLI::App* dump = app.add_subcommand("dump-llr", "Dump exact and max-log LLRs as CSV");
    dump->add_option("-m,--modulation", dump_args.modulation, "bpsk|qpsk|qam16|qam64|qam256")
        ->required();
    dump->add_option("--ebn0", dump_args.ebn0_db, "Eb/N0 in dB (default 6)");
    dump->add_option("--symbols", dump_args.symbols, "number of symbols (default 100)");
    dump->add_option("--seed", dump_args.seed, "seed");
    dump->add_option("-o,--output", dump_args.output, "CSV path (default stdout)");
    dump->callback([&] { run_dump_llr(dump_args); });

    std::string info_path;
    CLI::App* info = app.add_subcommand("info", "Inspect a checkpoint");
    info->add_option("checkpoint", info_path, "checkpoint path")->required();
    info->callback([&] { run_info(info_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
