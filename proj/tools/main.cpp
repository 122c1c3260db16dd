#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "ndec/errors.hpp"

using namespace ndec::cli;

namespace {

void add_code_options(CLI::App& cmd, CodeOptions& c) {
    cmd.add_option("--code", c.name, "Named code: bch6345 or bch6336");
    cmd.add_option("--m", c.m, "BCH field degree (2..10), with --t");
    cmd.add_option("--t", c.t, "BCH designed error-correction radius, with --m");
}

void add_eval_options(CLI::App& cmd, EvalOptions& e, bool sweep) {
    add_code_options(cmd, e.code);
    if (!sweep) cmd.add_option("--decoder", e.decoder, "sbnd, ied, bdd or ml")->capture_default_str();
    cmd.add_option("--model", e.model, "Model file from `ndec train` (sbnd/ied)");
    cmd.add_option("--ebn0", e.ebn0, "Eb/N0 grid in dB: a:b:step or a,b,c")->capture_default_str();
    cmd.add_option("--T", e.t_list, sweep ? "IED iteration limits: list or a:b" : "IED iteration limit")
        ->capture_default_str();
    if (sweep) e.t_list = "1:5";
    cmd.add_option("--stop-rule", e.stop_rule, "IED stopping: hard (zero syndrome of hard decisions) or estimate")->capture_default_str();
    if (sweep)
        cmd.add_option("--baselines", e.baselines, "Paired baselines: comma list of bdd, ml, sbnd or none")
            ->capture_default_str();
    cmd.add_option("--min-errors", e.min_errors, "Block errors required per point")->capture_default_str();
    cmd.add_option("--max-blocks", e.max_blocks, "Block cap per point")->capture_default_str();
    cmd.add_option("--batch-blocks", e.batch_blocks, "Blocks per worker per round")->capture_default_str();
    cmd.add_option("--workers", e.workers, "Worker threads")->capture_default_str();
    cmd.add_option("--seed", e.seed, "Master seed")->capture_default_str();
    cmd.add_flag("--random-codeword", e.random_codeword, "Transmit random codewords instead of the zero word");
    cmd.add_option("--noise-mode", e.noise_mode, "rate (sigma uses the code rate) or literal")->capture_default_str();
    cmd.add_option("--out", e.out, sweep ? "Output prefix; writes PREFIX_<decoder>.csv" : "Metrics CSV (default stdout)");
    cmd.add_flag("--quiet", e.quiet, "No progress lines on stderr");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Syndrome-based neural decoding of BCH codes with iterative error decimation"};
    app.set_version_flag("--version", "ndec 0.1.0");
    app.set_config("--config", "", "key=value file; use [train], [eval] ... sections for command options");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CodeOptions info;
    auto* info_cmd = app.add_subcommand("code-info", "Print code parameters, g(x) and H");
    add_code_options(*info_cmd, info);

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "Train an error estimator on streamed zero-codeword batches");
    add_code_options(*train_cmd, tr.code);
    train_cmd->add_option("--variant", tr.variant, "bch6345, bch6336, bch6336_no_bn, bch6336_relu_no_bn or custom");
    train_cmd->add_option("--hidden", tr.hidden, "Custom hidden widths: 4x128 or 300,300")->capture_default_str();
    train_cmd->add_option("--activation", tr.activation, "Custom activation: relu or sigmoid")->capture_default_str();
    train_cmd->add_flag("--batch-norm", tr.batch_norm, "Custom: batch norm after each hidden dense layer");
    train_cmd->add_option("--skip", tr.skip, "Custom: concat block FROM output onto block TO input, FROM:TO");
    train_cmd->add_option("--schedule", tr.schedule, "plateau, triangular or constant (default follows the code)");
    train_cmd->add_option("--lr", tr.lr, "Initial (plateau) or constant learning rate")->capture_default_str();
    train_cmd->add_option("--lr-factor", tr.lr_factor, "Plateau reduction factor")->capture_default_str();
    train_cmd->add_option("--patience", tr.patience, "Plateau patience in epochs")->capture_default_str();
    train_cmd->add_option("--min-lr", tr.min_lr, "Triangular minimum")->capture_default_str();
    train_cmd->add_option("--max-lr", tr.max_lr, "Triangular maximum")->capture_default_str();
    train_cmd->add_option("--half-cycle", tr.half_cycle, "Triangular half-cycle in iterations")->capture_default_str();
    train_cmd->add_option("--batch", tr.batch, "Batch size")->capture_default_str();
    train_cmd->add_option("--examples", tr.examples, "Total training examples")->capture_default_str();
    train_cmd->add_option("--epochs", tr.epochs, "Epochs")->capture_default_str();
    train_cmd->add_option("--train-ebn0", tr.train_ebn0, "Training Eb/N0 in dB")->capture_default_str();
    train_cmd->add_option("--validation", tr.validation, "Validation set size")->capture_default_str();
    train_cmd->add_option("--noise-mode", tr.noise_mode, "rate or literal")->capture_default_str();
    train_cmd->add_option("--seed", tr.seed, "Seed for init, batches and validation set")->capture_default_str();
    train_cmd->add_option("--out", tr.out, "Model file")->required();
    train_cmd->add_option("--history", tr.history, "History CSV (default OUT.history.csv)");
    train_cmd->add_flag("--quiet", tr.quiet, "No progress lines on stderr");

    EvalOptions ev;
    auto* eval_cmd = app.add_subcommand("eval", "Monte Carlo BER/BLER of one decoder over an Eb/N0 grid");
    add_eval_options(*eval_cmd, ev, false);

    EvalOptions sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "IED over a list of T plus baselines, all on identical noise");
    add_eval_options(*sweep_cmd, sw, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*info_cmd) return cmd_code_info(info);
        if (*train_cmd) return cmd_train(tr);
        if (*eval_cmd) return cmd_eval(ev);
        if (*sweep_cmd) return cmd_sweep(sw);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        for (auto* sub : app.get_subcommands()) std::cerr << sub->help();
        return 2;
    } catch (const ndec::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
