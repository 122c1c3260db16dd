#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ndec/architectures.hpp"
#include "ndec/errors.hpp"
#include "ndec/harness.hpp"
#include "ndec/model_io.hpp"
#include "ndec/trainer.hpp"

namespace ndec::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("bad number '" + s + "' in " + what);
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("bad number '" + s + "' in " + what);
    return v;
}

std::size_t to_count(const std::string& s, const std::string& what, double min = 1) {
    const double v = to_double(s, what);
    if (v < min || v != std::floor(v)) throw UsageError("expected an integer >= " + std::to_string(int(min)) + " in " + what + ", got '" + s + "'");
    return static_cast<std::size_t>(v);
}

// Turns library argument errors raised while interpreting flags into usage errors.
template <class F>
auto as_usage(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

StoredModel load_matching_model(const std::string& path, const LinearCode& code) {
    if (path.empty()) throw UsageError("this decoder needs --model");
    auto stored = load_model(path);
    if (stored.n != code.n() || stored.k != code.k())
        throw ConfigError("model was trained for (" + std::to_string(stored.n) + "," + std::to_string(stored.k) +
                          ") but the code is " + code.name());
    if (stored.model.input_dim() != network_input_dim(code) || stored.model.output_dim() != code.n())
        throw ConfigError("model dimensions do not match " + code.name());
    return stored;
}

EvalConfig eval_config(const EvalOptions& o) {
    EvalConfig cfg;
    cfg.ebn0_db_list = parse_ebn0_grid(o.ebn0);
    cfg.min_block_errors = o.min_errors;
    cfg.max_blocks = o.max_blocks;
    cfg.batch_blocks = o.batch_blocks;
    cfg.master_seed = o.seed;
    cfg.zero_codeword = !o.random_codeword;
    cfg.noise_mode = parse_noise_mode(o.noise_mode);
    cfg.workers = o.workers;
    as_usage([&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

void write_records(const std::vector<MetricsRecord>& records, const std::string& path) {
    if (path.empty() || path == "-") {
        write_metrics_csv(records, std::cout);
        return;
    }
    export_csv(records, path);
}

}  // namespace

LinearCode resolve_code(const CodeOptions& opts) {
    if (!opts.name.empty()) {
        if (opts.m || opts.t) throw UsageError("give either --code or --m/--t, not both");
        if (opts.name == "bch6345") return bch_construct(6, 3);
        if (opts.name == "bch6336") return bch_construct(6, 5);
        throw UsageError("unknown code '" + opts.name + "' (bch6345, bch6336)");
    }
    if (!opts.m || !opts.t) throw UsageError("a code is required: --code NAME or --m M --t T");
    return as_usage([&] { return bch_construct(opts.m, opts.t); });
}

std::vector<double> parse_ebn0_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 3) {
        const double a = to_double(parts[0], "--ebn0");
        const double b = to_double(parts[1], "--ebn0");
        const double step = to_double(parts[2], "--ebn0");
        if (step <= 0.0 || b < a) throw UsageError("--ebn0 a:b:step needs a <= b and step > 0");
        std::vector<double> out;
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (count > 10000) throw UsageError("--ebn0 grid has too many points");
        for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    if (parts.size() != 1 || text.find(':') != std::string::npos) throw UsageError("--ebn0 expects a:b:step or a list");
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(to_double(p, "--ebn0"));
    if (out.empty()) throw UsageError("--ebn0 is empty");
    return out;
}

std::vector<std::size_t> parse_t_list(const std::string& text) {
    const auto range = split(text, ':');
    std::vector<std::size_t> out;
    if (range.size() == 2) {
        const auto a = to_count(range[0], "--T");
        const auto b = to_count(range[1], "--T");
        if (b < a) throw UsageError("--T a:b needs a <= b");
        for (auto t = a; t <= b; ++t) out.push_back(t);
        return out;
    }
    for (const auto& p : split(text, ',')) out.push_back(to_count(p, "--T"));
    if (out.empty()) throw UsageError("--T is empty");
    return out;
}

NoiseMode parse_noise_mode(const std::string& text) {
    if (text == "rate" || text == "rate_normalized") return NoiseMode::rate_normalized;
    if (text == "literal") return NoiseMode::literal;
    throw UsageError("--noise-mode must be rate or literal");
}

IedStopRule parse_stop_rule(const std::string& text) {
    if (text == "hard") return IedStopRule::hard_decision;
    if (text == "estimate") return IedStopRule::thresholded_estimate;
    throw UsageError("--stop-rule must be hard or estimate");
}

int cmd_code_info(const CodeOptions& opts) {
    const auto code = resolve_code(opts);
    std::cout << describe(code);
    return 0;
}

int cmd_train(const TrainOptions& o) {
    const auto code = resolve_code(o.code);
    if (o.out.empty()) throw UsageError("--out is required");

    // Defaults follow the code.
    Variant variant = o.code.name == "bch6345" ? Variant::bch6345
                      : o.code.name == "bch6336" ? Variant::bch6336
                                                 : Variant::custom;
    if (!o.variant.empty()) variant = as_usage([&] { return parse_variant(o.variant); });
    const std::string schedule_name =
        !o.schedule.empty() ? o.schedule : (variant == Variant::bch6345 || variant == Variant::custom ? "plateau" : "triangular");

    CustomArchitecture arch;
    if (variant == Variant::custom) {
        arch.hidden = as_usage([&] { return parse_hidden_widths(o.hidden); });
        if (o.activation == "relu") arch.activation = LayerKind::relu;
        else if (o.activation == "sigmoid") arch.activation = LayerKind::sigmoid;
        else throw UsageError("--activation must be relu or sigmoid");
        arch.batch_norm = o.batch_norm;
        if (!o.skip.empty()) {
            const auto parts = split(o.skip, ':');
            if (parts.size() != 2) throw UsageError("--skip expects from:to");
            arch.skip = std::pair{to_count(parts[0], "--skip", 0), to_count(parts[1], "--skip", 0)};
        }
    }

    const auto schedule = as_usage([&] {
        if (schedule_name == "plateau") return LrSchedule::plateau(o.lr, o.lr_factor, o.patience);
        if (schedule_name == "triangular") return LrSchedule::triangular(o.min_lr, o.max_lr, o.half_cycle);
        if (schedule_name == "constant") return LrSchedule::constant(o.lr);
        throw UsageError("--schedule must be plateau, triangular or constant");
    });

    TrainConfig cfg;
    cfg.batch_size = o.batch;
    cfg.total_examples = o.examples;
    cfg.epochs = o.epochs;
    cfg.train_ebn0_db = o.train_ebn0;
    cfg.noise_mode = parse_noise_mode(o.noise_mode);
    cfg.validation_examples = o.validation;
    cfg.seed = o.seed;
    auto model = as_usage([&] {
        schedule.validate();
        cfg.validate();
        Rng init(derive_seed(cfg.seed, 0));
        return build_architecture(code, variant, init, arch);
    });

    if (!o.quiet)
        std::cerr << "training " << to_string(variant) << " for " << code.name() << ": " << model.trainable_count()
                  << " parameters, " << cfg.epochs << " epochs x " << cfg.batches_per_epoch() << " batches of "
                  << cfg.batch_size << ", " << schedule_name << " schedule\n";

    Rng stream(derive_seed(cfg.seed, 1));
    const auto on_best = [&](const Mlp& best, const EpochRecord&) { save_model(o.out, best, code.n(), code.k()); };
    const auto result = train(model, code, cfg, schedule, stream, on_best, o.quiet ? nullptr : &std::cerr);
    save_model(o.out, model, code.n(), code.k());

    const auto history_path = o.history.empty() ? o.out + ".history.csv" : o.history;
    auto hist = open_output(history_path);
    write_history_csv(result.history, hist);
    if (!hist) throw IoError("failed writing '" + history_path + "'");

    char line[160];
    std::snprintf(line, sizeof line, "best validation loss %.6g at epoch %zu\n", result.best_val_loss, result.best_epoch);
    std::cout << line;
    return 0;
}

int cmd_eval(const EvalOptions& o) {
    const auto code = std::make_shared<const LinearCode>(resolve_code(o.code));
    const auto cfg = eval_config(o);
    std::unique_ptr<Decoder> decoder;
    if (o.decoder == "bdd") {
        decoder = std::make_unique<BddDecoder>(code);
    } else if (o.decoder == "ml") {
        decoder = std::make_unique<MlDecoder>(code);
    } else if (o.decoder == "sbnd" || o.decoder == "ied") {
        const auto rule = parse_stop_rule(o.stop_rule);
        const auto t_list = parse_t_list(o.t_list);
        if (o.decoder == "ied" && t_list.size() != 1) throw UsageError("eval takes a single --T; use sweep for a list");
        auto est = std::make_shared<const NetworkEstimator>(load_matching_model(o.model, *code).model);
        if (o.decoder == "sbnd") decoder = std::make_unique<SbndDecoder>(code, est);
        else decoder = std::make_unique<IedDecoder>(code, est, t_list.front(), rule);
    } else {
        throw UsageError("--decoder must be sbnd, ied, bdd or ml");
    }
    write_records(evaluate(*decoder, *code, cfg, o.quiet ? nullptr : &std::cerr), o.out);
    return 0;
}

int cmd_sweep(const EvalOptions& o) {
    const auto code = std::make_shared<const LinearCode>(resolve_code(o.code));
    const auto cfg = eval_config(o);
    const auto t_list = parse_t_list(o.t_list);
    const auto rule = parse_stop_rule(o.stop_rule);
    if (o.out.empty()) throw UsageError("sweep needs --out PREFIX; one CSV is written per decoder");

    const auto stored = load_matching_model(o.model, *code);
    auto est = std::make_shared<const NetworkEstimator>(stored.model);
    std::vector<std::unique_ptr<Decoder>> owned;
    for (const auto& b : split(o.baselines, ',')) {
        if (b == "none") continue;
        if (b == "bdd") owned.push_back(std::make_unique<BddDecoder>(code));
        else if (b == "ml") owned.push_back(std::make_unique<MlDecoder>(code));
        else if (b == "sbnd") owned.push_back(std::make_unique<SbndDecoder>(code, est));
        else throw UsageError("--baselines accepts bdd, ml, sbnd or none");
    }
    for (auto t : t_list) owned.push_back(std::make_unique<IedDecoder>(code, est, t, rule));

    std::vector<const Decoder*> decoders;
    for (const auto& d : owned) decoders.push_back(d.get());
    const auto results = evaluate_paired(*code, decoders, cfg, {}, o.quiet ? nullptr : &std::cerr);
    for (std::size_t d = 0; d < decoders.size(); ++d) {
        const auto path = o.out + "_" + decoders[d]->name() + ".csv";
        export_csv(results[d], path);
        std::cout << path << '\n';
    }
    return 0;
}

}  // namespace ndec::cli
