// flowfwd: price calls on flow forwards under an exponential forward-curve
// model, train curve-to-price networks, and export figure data.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowfwd/harness.hpp"

using namespace flowfwd;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "experiment config (INI)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "override the base seed");
    cmd->add_option("--workers", c.workers, "worker threads (default: FLOWFWD_WORKERS or all)");
}

// config file, then per-flag overrides
ExperimentConfig make_config(const CommonOpts& c) {
    ExperimentConfig cfg = c.config_path.empty()
                               ? default_config()
                               : config_from_ini(IniFile::parse_file(c.config_path));
    if (c.seed) cfg.base_seed = *c.seed;
    return cfg;
}

std::vector<double> parse_coeffs(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("bad coefficient '" + cell + "'");
        }
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::runtime_error("bad coefficient '" + cell + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::runtime_error("empty coefficient list");
    return out;
}

std::vector<double> coeffs_or_zero(const std::string& text, int n) {
    if (text.empty()) return std::vector<double>(n, 0.0);
    return parse_coeffs(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flow forward option pricing and curve-to-price networks"};
    app.require_subcommand(1);
    argv = app.ensure_utf8(argv);

    CommonOpts common;

    // gen-train / gen-test
    std::string out_path;
    std::optional<long long> n_rows, mc_sims;
    std::string format_name;
    auto add_gen = [&](const char* name, const char* help) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, common);
        cmd->add_option("--out", out_path, "output dataset path")->required();
        cmd->add_option("--n", n_rows, "row count override");
        cmd->add_option("--format", format_name, "csv or binary");
        return cmd;
    };
    CLI::App* gen_train = add_gen("gen-train", "sample curves and one payoff draw per row");
    CLI::App* gen_test =
        add_gen("gen-test", "sample curves and Monte Carlo price labels with standard errors");
    gen_test->add_option("--mc-sims", mc_sims, "simulations per label");

    // train
    std::string data_path, ckpt_path, metrics_path, network_kind, activation_name, optimizer_nm;
    std::optional<int> epochs, batch, nodes, hidden, grid_size;
    std::optional<double> lr;
    std::optional<std::uint64_t> train_seed;
    CLI::App* train_cmd = app.add_subcommand("train", "fit a network to a labeled dataset");
    add_common(train_cmd, common);
    train_cmd->add_option("--data", data_path, "training dataset")->required();
    train_cmd->add_option("--out", ckpt_path, "checkpoint path")->required();
    train_cmd->add_option("--metrics", metrics_path, "write per-epoch losses (JSON)");
    train_cmd->add_option("--network", network_kind, "hilbert or classical");
    train_cmd->add_option("--nodes", nodes, "hilbert: node count");
    train_cmd->add_option("--hidden", hidden, "classical: hidden units");
    train_cmd->add_option("--grid-size", grid_size, "classical: feature grid points");
    train_cmd->add_option("--activation", activation_name, "classical: tanh, relu or logistic");
    train_cmd->add_option("--epochs", epochs, "training epochs");
    train_cmd->add_option("--batch-size", batch, "minibatch size");
    train_cmd->add_option("--lr", lr, "learning rate");
    train_cmd->add_option("--optimizer", optimizer_nm, "adam or sgd");
    train_cmd->add_option("--train-seed", train_seed, "shuffle/init seed");

    // eval
    CLI::App* eval_cmd = app.add_subcommand("eval", "mean squared error on a labeled dataset");
    add_common(eval_cmd, common);
    eval_cmd->add_option("--checkpoint", ckpt_path, "trained model")->required();
    eval_cmd->add_option("--data", data_path, "test dataset")->required();

    // price
    std::string coeff_text;
    bool use_mc = false;
    CLI::App* price_cmd = app.add_subcommand("price", "price one curve");
    add_common(price_cmd, common);
    price_cmd->add_option("--coeffs", coeff_text, "comma-separated curve coefficients")
        ->required();
    price_cmd->add_option("--checkpoint", ckpt_path, "price with a trained model");
    price_cmd->add_flag("--mc", use_mc, "price by Monte Carlo instead");
    price_cmd->add_option("--sims", mc_sims, "Monte Carlo simulations");

    // delta
    CLI::App* delta_cmd =
        app.add_subcommand("delta", "curve-level sensitivity of a trained model");
    add_common(delta_cmd, common);
    delta_cmd->add_option("--checkpoint", ckpt_path, "trained model")->required();
    delta_cmd->add_option("--coeffs", coeff_text, "comma-separated curve coefficients")
        ->required();

    // sweep
    int sweep_index = 1, sweep_steps = 31;
    double sweep_min = -0.5, sweep_max = 0.5;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "vary one coefficient; tabulate net and Monte Carlo prices");
    add_common(sweep_cmd, common);
    sweep_cmd->add_option("--checkpoint", ckpt_path, "trained model")->required();
    sweep_cmd->add_option("--out", out_path, "output CSV")->required();
    sweep_cmd->add_option("--index", sweep_index, "coefficient to vary (1-based)");
    sweep_cmd->add_option("--min", sweep_min, "sweep start");
    sweep_cmd->add_option("--max", sweep_max, "sweep end");
    sweep_cmd->add_option("--steps", sweep_steps, "grid points");
    sweep_cmd->add_option("--coeffs", coeff_text, "held coefficients (default all zero)");
    sweep_cmd->add_option("--sims", mc_sims, "Monte Carlo simulations per point");

    // verify-basis
    int basis_size = 7;
    std::string variant_name = "standard";
    CLI::App* verify_cmd =
        app.add_subcommand("verify-basis", "check orthonormality and the evaluation identity");
    verify_cmd->add_option("--size", basis_size, "basis size (1-7)");
    verify_cmd->add_option("--variant", variant_name, "standard or alt");

    CLI11_PARSE(app, argc, argv);

    try {
        const int workers = resolve_workers(common.workers);

        if (gen_train->parsed() || gen_test->parsed()) {
            ExperimentConfig cfg = make_config(common);
            if (!format_name.empty()) cfg.format = dataset_format_from_name(format_name);
            if (mc_sims) cfg.mc_sims = *mc_sims;
            if (gen_train->parsed()) {
                if (n_rows) cfg.n_train = *n_rows;
                generate_training_data(cfg, out_path, workers);
                std::printf("wrote %lld training rows to %s\n", cfg.n_train, out_path.c_str());
            } else {
                if (n_rows) cfg.n_test = *n_rows;
                generate_test_data(cfg, out_path, workers);
                std::printf("wrote %lld test rows to %s\n", cfg.n_test, out_path.c_str());
            }
        } else if (train_cmd->parsed()) {
            ExperimentConfig cfg = make_config(common);
            if (!network_kind.empty()) cfg.network.kind = network_kind;
            if (nodes) cfg.network.nodes = *nodes;
            if (hidden) cfg.network.hidden = *hidden;
            if (grid_size) cfg.network.grid_size = *grid_size;
            if (!activation_name.empty())
                cfg.network.activation = activation_from_name(activation_name);
            if (epochs) cfg.train.epochs = *epochs;
            if (batch) cfg.train.batch_size = *batch;
            if (lr) cfg.train.learning_rate = *lr;
            if (!optimizer_nm.empty()) cfg.train.optimizer = optimizer_from_name(optimizer_nm);
            if (train_seed) cfg.train.seed = *train_seed;
            const TrainSummary sum =
                train_model(cfg, data_path, ckpt_path, metrics_path, workers);
            std::printf("trained %s (%zu parameters) in %.1fs, final epoch mse %.6g\n",
                        cfg.network.kind.c_str(), sum.param_count, sum.wall_seconds,
                        sum.history.epoch_loss.back());
        } else if (eval_cmd->parsed()) {
            const EvalReport rep = evaluate_checkpoint(ckpt_path, data_path, workers);
            std::printf("mse %.10g over %lld rows\n", rep.mse, rep.rows);
        } else if (price_cmd->parsed()) {
            const std::vector<double> x = parse_coeffs(coeff_text);
            if (use_mc != ckpt_path.empty())
                throw std::runtime_error("pass exactly one of --checkpoint and --mc");
            if (use_mc) {
                ExperimentConfig cfg = make_config(common);
                if (mc_sims) cfg.mc_sims = *mc_sims;
                if (static_cast<int>(x.size()) != cfg.basis_size)
                    throw std::runtime_error("expected " + std::to_string(cfg.basis_size) +
                                             " coefficients, got " + std::to_string(x.size()));
                const OrthonormalBasis basis(cfg.basis_size, cfg.basis_variant);
                const PriceEstimate est = mc_price(basis, x, cfg.noise, cfg.contract, cfg.mc_sims,
                                                   stream_seed(cfg.base_seed, 4), workers);
                std::printf("price %.10g (std error %.3g, %lld sims)\n", est.price,
                            est.std_error, est.n_sims);
            } else {
                const Checkpoint ck = load_checkpoint(ckpt_path);
                std::printf("price %.10g\n", checkpoint_price(ck, x));
            }
        } else if (delta_cmd->parsed()) {
            const Checkpoint ck = load_checkpoint(ckpt_path);
            std::printf("delta %.10g\n", checkpoint_level_delta(ck, parse_coeffs(coeff_text)));
        } else if (sweep_cmd->parsed()) {
            ExperimentConfig cfg = make_config(common);
            if (mc_sims) cfg.mc_sims = *mc_sims;
            const Checkpoint ck = load_checkpoint(ckpt_path);
            const std::vector<double> base = coeffs_or_zero(coeff_text, ck.basis_size);
            sweep_coefficient(cfg, ck, sweep_index, sweep_min, sweep_max, sweep_steps, base,
                              out_path, workers);
            std::printf("wrote %d sweep points to %s\n", sweep_steps, out_path.c_str());
        } else if (verify_cmd->parsed()) {
            const OrthonormalBasis::Variant variant =
                variant_name == "alt" ? OrthonormalBasis::Variant::Alt
                                      : OrthonormalBasis::Variant::Standard;
            if (variant_name != "alt" && variant_name != "standard")
                throw std::runtime_error("variant must be standard or alt");
            std::string report;
            const bool ok = verify_basis(basis_size, variant, report);
            std::fputs(report.c_str(), stdout);
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
