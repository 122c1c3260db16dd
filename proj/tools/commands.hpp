#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndec/channel.hpp"
#include "ndec/decoders.hpp"
#include "ndec/linear_code.hpp"

namespace ndec::cli {

struct CodeOptions {
    std::string name;  // bch6345 | bch6336, or empty for --m/--t
    unsigned m = 0;
    unsigned t = 0;
};

struct TrainOptions {
    CodeOptions code;
    std::string variant;  // empty: default for the code
    std::string hidden = "4x128";
    std::string activation = "relu";
    bool batch_norm = false;
    std::string skip;  // "from:to"
    std::string schedule;  // empty: default for the code
    double lr = 1e-3;
    double lr_factor = 0.1;
    std::size_t patience = 5;
    double min_lr = 1e-5;
    double max_lr = 1e-3;
    std::size_t half_cycle = 64;
    std::size_t batch = 2048;
    std::uint64_t examples = 10'000'000;
    std::size_t epochs = 10;
    double train_ebn0 = 4.0;
    std::size_t validation = 100'000;
    std::string noise_mode = "rate";
    std::uint64_t seed = 1;
    std::string out;
    std::string history;
    bool quiet = false;
};

struct EvalOptions {
    CodeOptions code;
    std::string decoder = "ied";
    std::string model;
    std::string ebn0 = "4";
    std::string t_list = "5";
    std::string stop_rule = "hard";
    std::string baselines = "bdd";  // sweep only
    std::uint64_t min_errors = 100;
    std::uint64_t max_blocks = 10'000'000;
    std::uint64_t batch_blocks = 1000;
    std::size_t workers = 1;
    std::uint64_t seed = 1;
    bool random_codeword = false;
    std::string noise_mode = "rate";
    std::string out;
    bool quiet = false;
};

/// Raised for bad flag values discovered after parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

LinearCode resolve_code(const CodeOptions& opts);
std::vector<double> parse_ebn0_grid(const std::string& text);
std::vector<std::size_t> parse_t_list(const std::string& text);
NoiseMode parse_noise_mode(const std::string& text);
IedStopRule parse_stop_rule(const std::string& text);

int cmd_code_info(const CodeOptions& opts);
int cmd_train(const TrainOptions& opts);
int cmd_eval(const EvalOptions& opts);
int cmd_sweep(const EvalOptions& opts);

}  // namespace ndec::cli
