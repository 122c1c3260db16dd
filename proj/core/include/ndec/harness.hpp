#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ndec/channel.hpp"
#include "ndec/decoders.hpp"
#include "ndec/linear_code.hpp"
#include "ndec/mlp.hpp"

namespace ndec {

struct EvalConfig {
    std::vector<double> ebn0_db_list;
    std::uint64_t min_block_errors = 100;
    std::uint64_t max_blocks = 10'000'000;
    std::uint64_t batch_blocks = 1000;
    std::uint64_t master_seed = 1;
    bool zero_codeword = true;
    NoiseMode noise_mode = NoiseMode::rate_normalized;
    std::size_t workers = 1;

    void validate() const;
};

struct MetricsRecord {
    double ebn0_db = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t bits = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
    double bler = 0.0;
    double ber = 0.0;
    double avg_iterations = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    /// Stopped at max_blocks before reaching min_block_errors.
    bool low_confidence = false;
};

/// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// Observer for block-level outcomes: (point index, block index, decoder
/// index, transmitted codeword, outcome). Called from worker threads in
/// deterministic order only when workers == 1.
using BlockObserver =
    std::function<void(std::size_t, std::uint64_t, std::size_t, const BitVector&, const DecodeOutcome&)>;

/// Monte Carlo evaluation of several decoders on identical channel
/// realizations. For each Eb/N0 point, blocks are simulated in rounds of
/// `batch_blocks` per worker until every decoder has at least
/// `min_block_errors` block errors or `max_blocks` is reached. Results are a
/// deterministic function of (master_seed, workers). Returns one record list
/// per decoder.
std::vector<std::vector<MetricsRecord>> evaluate_paired(const LinearCode& code,
                                                        std::span<const Decoder* const> decoders,
                                                        const EvalConfig& config,
                                                        const BlockObserver& observer = {},
                                                        std::ostream* progress = nullptr);

std::vector<MetricsRecord> evaluate(const Decoder& decoder, const LinearCode& code, const EvalConfig& config,
                                    std::ostream* progress = nullptr);

/// IED for each T in t_list, all on the same channel realizations.
std::vector<std::vector<MetricsRecord>> sweep_T(const Mlp& model, std::shared_ptr<const LinearCode> code,
                                                std::span<const std::size_t> t_list, const EvalConfig& config,
                                                IedStopRule rule = IedStopRule::hard_decision,
                                                std::ostream* progress = nullptr);

inline constexpr const char* kMetricsCsvHeader =
    "ebn0_db,blocks,bits,block_errors,bit_errors,bler,ber,avg_iterations,ci_low,ci_high";

void write_metrics_csv(std::span<const MetricsRecord> records, std::ostream& out);
void export_csv(std::span<const MetricsRecord> records, const std::string& path);
std::vector<MetricsRecord> parse_metrics_csv(std::istream& in);

}  // namespace ndec
