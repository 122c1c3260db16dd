#include "ndec/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ndec/errors.hpp"
#include "ndec/rng.hpp"

namespace ndec {

namespace {

struct Counters {
    std::uint64_t blocks = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t iterations = 0;

    Counters& operator+=(const Counters& o) {
        blocks += o.blocks;
        block_errors += o.block_errors;
        bit_errors += o.bit_errors;
        iterations += o.iterations;
        return *this;
    }
};

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void EvalConfig::validate() const {
    if (ebn0_db_list.empty()) throw ConfigError("no Eb/N0 points to evaluate");
    if (min_block_errors < 1) throw RangeError("min_block_errors must be >= 1");
    if (batch_blocks < 1) throw RangeError("batch_blocks must be >= 1");
    if (max_blocks < batch_blocks) throw RangeError("max_blocks must be >= batch_blocks");
    if (workers < 1) throw RangeError("worker count must be >= 1");
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

std::vector<std::vector<MetricsRecord>> evaluate_paired(const LinearCode& code,
                                                        std::span<const Decoder* const> decoders,
                                                        const EvalConfig& config, const BlockObserver& observer,
                                                        std::ostream* progress) {
    config.validate();
    if (decoders.empty()) throw ConfigError("no decoders to evaluate");
    for (const auto* d : decoders)
        if (d->n() != code.n()) throw ConfigError("decoder '" + d->name() + "' does not match the code length");

    const auto n = code.n();
    const auto k = code.k();
    const std::size_t count = decoders.size();
    std::vector<std::vector<MetricsRecord>> results(count);
    std::mutex observer_mutex;

    for (std::size_t p = 0; p < config.ebn0_db_list.size(); ++p) {
        const double ebn0 = config.ebn0_db_list[p];
        const double sigma = sigma_from_ebn0(ebn0, code.rate(), config.noise_mode);
        std::vector<Counters> totals(count);
        std::uint64_t simulated = 0;
        std::uint64_t chunk_base = 0;

        auto run_chunk = [&](std::uint64_t chunk, std::uint64_t first_block, std::uint64_t blocks,
                             std::vector<Counters>& local) {
            Rng rng(derive_seed(config.master_seed, p, chunk));
            BitVector c(n);
            BitVector u(k);
            std::vector<double> y(n);
            for (std::uint64_t b = 0; b < blocks; ++b) {
                if (!config.zero_codeword) {
                    for (std::size_t i = 0; i < k; ++i) u.set(i, rng.bit());
                    c = code.encode(u);
                }
                transmit_into(c, sigma, rng, y);
                for (std::size_t d = 0; d < count; ++d) {
                    const auto outcome = decoders[d]->decode(y);
                    const auto errors = outcome.c_hat.hamming_distance(c);
                    auto& cnt = local[d];
                    ++cnt.blocks;
                    cnt.bit_errors += errors;
                    cnt.block_errors += errors > 0 ? 1 : 0;
                    cnt.iterations += outcome.iterations_used;
                    if (observer) {
                        std::lock_guard lock(observer_mutex);
                        observer(p, first_block + b, d, c, outcome);
                    }
                }
            }
        };

        while (true) {
            // One round: each worker simulates up to batch_blocks blocks.
            std::vector<std::uint64_t> sizes(config.workers, 0);
            std::uint64_t remaining = config.max_blocks - simulated;
            for (auto& s : sizes) {
                s = std::min(config.batch_blocks, remaining);
                remaining -= s;
            }
            std::vector<std::vector<Counters>> local(config.workers, std::vector<Counters>(count));
            std::vector<std::uint64_t> first(config.workers, simulated);
            for (std::size_t w = 1; w < config.workers; ++w) first[w] = first[w - 1] + sizes[w - 1];

            if (config.workers == 1) {
                run_chunk(chunk_base, first[0], sizes[0], local[0]);
            } else {
                std::vector<std::jthread> threads;
                for (std::size_t w = 0; w < config.workers; ++w)
                    if (sizes[w] > 0)
                        threads.emplace_back([&, w] { run_chunk(chunk_base + w, first[w], sizes[w], local[w]); });
            }
            for (std::size_t w = 0; w < config.workers; ++w) {
                simulated += sizes[w];
                for (std::size_t d = 0; d < count; ++d) totals[d] += local[w][d];
            }
            chunk_base += config.workers;

            bool enough = true;
            for (const auto& t : totals) enough = enough && t.block_errors >= config.min_block_errors;
            if (enough || simulated >= config.max_blocks) break;
        }

        for (std::size_t d = 0; d < count; ++d) {
            const auto& t = totals[d];
            MetricsRecord rec;
            rec.ebn0_db = ebn0;
            rec.blocks = t.blocks;
            rec.bits = t.blocks * n;
            rec.block_errors = t.block_errors;
            rec.bit_errors = t.bit_errors;
            rec.bler = static_cast<double>(t.block_errors) / static_cast<double>(t.blocks);
            rec.ber = static_cast<double>(t.bit_errors) / static_cast<double>(rec.bits);
            rec.avg_iterations = static_cast<double>(t.iterations) / static_cast<double>(t.blocks);
            std::tie(rec.ci_low, rec.ci_high) = wilson_interval(t.block_errors, t.blocks);
            rec.low_confidence = t.block_errors < config.min_block_errors;
            if (progress) {
                char line[200];
                std::snprintf(line, sizeof line, "[%s] Eb/N0 %.2f dB  blocks %llu  block errors %llu  BLER %.4g  BER %.4g%s\n",
                              decoders[d]->name().c_str(), ebn0, static_cast<unsigned long long>(rec.blocks),
                              static_cast<unsigned long long>(rec.block_errors), rec.bler, rec.ber,
                              rec.low_confidence ? "  (capped)" : "");
                *progress << line << std::flush;
            }
            results[d].push_back(rec);
        }
    }
    return results;
}

std::vector<MetricsRecord> evaluate(const Decoder& decoder, const LinearCode& code, const EvalConfig& config,
                                    std::ostream* progress) {
    const Decoder* list[] = {&decoder};
    return std::move(evaluate_paired(code, list, config, {}, progress).front());
}

std::vector<std::vector<MetricsRecord>> sweep_T(const Mlp& model, std::shared_ptr<const LinearCode> code,
                                                std::span<const std::size_t> t_list, const EvalConfig& config,
                                                IedStopRule rule, std::ostream* progress) {
    if (t_list.empty()) throw ConfigError("T list is empty");
    auto estimator = std::make_shared<const NetworkEstimator>(model);
    std::vector<std::unique_ptr<IedDecoder>> owned;
    std::vector<const Decoder*> decoders;
    for (auto t : t_list) {
        owned.push_back(std::make_unique<IedDecoder>(code, estimator, t, rule));
        decoders.push_back(owned.back().get());
    }
    return evaluate_paired(*code, decoders, config, {}, progress);
}

void write_metrics_csv(std::span<const MetricsRecord> records, std::ostream& out) {
    out << kMetricsCsvHeader << '\n';
    for (const auto& r : records) {
        out << format_real(r.ebn0_db) << ',' << r.blocks << ',' << r.bits << ',' << r.block_errors << ','
            << r.bit_errors << ',' << format_real(r.bler) << ',' << format_real(r.ber) << ','
            << format_real(r.avg_iterations) << ',' << format_real(r.ci_low) << ',' << format_real(r.ci_high) << '\n';
    }
}

void export_csv(std::span<const MetricsRecord> records, const std::string& path) {
    if (records.empty()) throw ConfigError("no records to export");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_metrics_csv(records, out);
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<MetricsRecord> parse_metrics_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMetricsCsvHeader) throw IoError("unexpected metrics CSV header");
    std::vector<MetricsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 10) throw IoError("metrics CSV row has " + std::to_string(f.size()) + " fields");
        MetricsRecord r;
        r.ebn0_db = std::stod(f[0]);
        r.blocks = std::stoull(f[1]);
        r.bits = std::stoull(f[2]);
        r.block_errors = std::stoull(f[3]);
        r.bit_errors = std::stoull(f[4]);
        r.bler = std::stod(f[5]);
        r.ber = std::stod(f[6]);
        r.avg_iterations = std::stod(f[7]);
        r.ci_low = std::stod(f[8]);
        r.ci_high = std::stod(f[9]);
        out.push_back(r);
    }
    return out;
}

}  // namespace ndec
