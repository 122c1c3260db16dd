#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/oracles.hpp"
#include "ndec/architectures.hpp"
#include "ndec/errors.hpp"
#include "ndec/harness.hpp"

using namespace ndec;

namespace {

// Knows the transmitted word is all-zero.
class CheatingDecoder final : public Decoder {
public:
    explicit CheatingDecoder(std::size_t n) : n_(n) {}
    DecodeOutcome decode(std::span<const double>) const override { return {BitVector(n_)}; }
    std::string name() const override { return "cheat"; }
    std::size_t n() const override { return n_; }

private:
    std::size_t n_;
};

class IdentityDecoder final : public Decoder {
public:
    explicit IdentityDecoder(std::size_t n) : n_(n) {}
    DecodeOutcome decode(std::span<const double> y) const override {
        BitVector b(n_);
        for (std::size_t i = 0; i < n_; ++i) b.set(i, y[i] < 0.0);
        return {b};
    }
    std::string name() const override { return "identity"; }
    std::size_t n() const override { return n_; }

private:
    std::size_t n_;
};

std::string to_csv(const std::vector<MetricsRecord>& records) {
    std::ostringstream os;
    write_metrics_csv(records, os);
    return os.str();
}

}  // namespace

TEST_SUITE("harness") {
    TEST_CASE("wilson interval") {
        const auto [lo, hi] = wilson_interval(10, 100);
        CHECK(lo == doctest::Approx(0.0552).epsilon(1e-3));
        CHECK(hi == doctest::Approx(0.1744).epsilon(1e-3));
        const auto [lo0, hi0] = wilson_interval(0, 1000);
        CHECK(lo0 == 0.0);
        CHECK(hi0 > 0.0);
        CHECK(hi0 < 0.004);
    }

    TEST_CASE("a perfect decoder runs to the cap and is flagged") {
        const auto code = bch_construct(4, 3);
        const CheatingDecoder dec(15);
        EvalConfig cfg;
        cfg.ebn0_db_list = {2.0};
        cfg.max_blocks = 5000;
        cfg.batch_blocks = 1000;
        const auto rec = evaluate(dec, code, cfg).front();
        CHECK(rec.blocks == 5000);
        CHECK(rec.bler == 0.0);
        CHECK(rec.low_confidence);
        CHECK(rec.ci_low == 0.0);
    }

    TEST_CASE("identity decoder at very high noise stops near 100 errors") {
        const auto code = bch_construct(4, 3);
        const IdentityDecoder dec(15);
        EvalConfig cfg;
        cfg.ebn0_db_list = {-10.0};
        cfg.batch_blocks = 10;
        const auto rec = evaluate(dec, code, cfg).front();
        CHECK(rec.bler > 0.95);
        CHECK(rec.block_errors >= 100);
        CHECK(rec.blocks <= 120);
        CHECK_FALSE(rec.low_confidence);
    }

    TEST_CASE("raw BER matches Q(1/sigma) within the Wilson interval") {
        const auto code = bch_construct(4, 3);
        const IdentityDecoder dec(15);
        EvalConfig cfg;
        cfg.ebn0_db_list = {4.0};
        cfg.noise_mode = NoiseMode::literal;
        cfg.min_block_errors = 2000;
        cfg.batch_blocks = 10000;
        const auto rec = evaluate(dec, code, cfg).front();
        const double p = testing::q_function(1.0 / sigma_from_ebn0(4.0, 1.0, NoiseMode::literal));
        // Bits are independent under the identity decoder; interval over bits.
        const auto [lo, hi] = wilson_interval(rec.bit_errors, rec.bits);
        CHECK(lo <= p);
        CHECK(p <= hi);
        CHECK(rec.ber <= rec.bler);
    }

    TEST_CASE("records are consistent and reproducible") {
        const auto code = std::make_shared<const LinearCode>(bch_construct(4, 2));
        const BddDecoder dec(code);
        EvalConfig cfg;
        cfg.ebn0_db_list = {0.0, 2.0, 4.0};
        cfg.batch_blocks = 200;
        cfg.max_blocks = 200000;
        cfg.master_seed = 123;
        const auto a = evaluate(dec, *code, cfg);
        const auto b = evaluate(dec, *code, cfg);
        CHECK(to_csv(a) == to_csv(b));
        for (const auto& r : a) {
            CHECK(r.bler == doctest::Approx(double(r.block_errors) / double(r.blocks)));
            CHECK(r.ber == doctest::Approx(double(r.bit_errors) / double(r.bits)));
            CHECK(r.ber <= r.bler);
            CHECK(r.ci_low <= r.bler);
            CHECK(r.bler <= r.ci_high);
            CHECK(r.avg_iterations == 1.0);
        }
        cfg.master_seed = 124;
        CHECK(to_csv(evaluate(dec, *code, cfg)) != to_csv(a));
    }

    TEST_CASE("multiple workers are deterministic for a fixed count") {
        const auto code = std::make_shared<const LinearCode>(bch_construct(4, 2));
        const BddDecoder dec(code);
        EvalConfig cfg;
        cfg.ebn0_db_list = {1.0};
        cfg.batch_blocks = 100;
        cfg.workers = 3;
        CHECK(to_csv(evaluate(dec, *code, cfg)) == to_csv(evaluate(dec, *code, cfg)));
    }

    TEST_CASE("paired decoders see identical noise") {
        const auto code = std::make_shared<const LinearCode>(bch_construct(4, 3));
        Rng rng(5);
        CustomArchitecture arch{{16}, LayerKind::relu, false, std::nullopt};
        auto est = std::make_shared<const NetworkEstimator>(build_architecture(*code, Variant::custom, rng, arch));
        const SbndDecoder sbnd(code, est);
        const IedDecoder ied1(code, est, 1);
        const Decoder* list[] = {&sbnd, &ied1};
        EvalConfig cfg;
        cfg.ebn0_db_list = {1.0, 3.0};
        cfg.batch_blocks = 50;
        std::vector<std::string> outcomes[2];
        const auto res = evaluate_paired(*code, list, cfg,
                                         [&](std::size_t, std::uint64_t, std::size_t d, const BitVector&,
                                             const DecodeOutcome& o) { outcomes[d].push_back(o.c_hat.to_string()); });
        CHECK(outcomes[0] == outcomes[1]);
        CHECK(to_csv(res[0]) == to_csv(res[1]));
    }

    TEST_CASE("random-codeword mode is consistent with zero-codeword mode") {
        const auto code = std::make_shared<const LinearCode>(bch_construct(4, 2));
        const BddDecoder dec(code);
        EvalConfig cfg;
        cfg.ebn0_db_list = {3.0};
        cfg.min_block_errors = 400;
        cfg.batch_blocks = 500;
        const auto zero = evaluate(dec, *code, cfg).front();
        cfg.zero_codeword = false;
        cfg.master_seed = 9;
        const auto random = evaluate(dec, *code, cfg).front();
        // Intervals overlap for statistically indistinguishable rates.
        CHECK(zero.ci_low <= random.ci_high);
        CHECK(random.ci_low <= zero.ci_high);
    }

    TEST_CASE("config validation") {
        const auto code = bch_construct(4, 3);
        const CheatingDecoder dec(15);
        EvalConfig cfg;
        CHECK_THROWS_AS(evaluate(dec, code, cfg), ConfigError);
        cfg.ebn0_db_list = {1.0};
        cfg.min_block_errors = 0;
        CHECK_THROWS_AS(evaluate(dec, code, cfg), RangeError);
        cfg.min_block_errors = 1;
        cfg.max_blocks = 10;
        CHECK_THROWS_AS(evaluate(dec, code, cfg), RangeError);
        cfg.max_blocks = 10000;
        const CheatingDecoder wrong(16);
        CHECK_THROWS_AS(evaluate(wrong, code, cfg), ConfigError);
    }
}

TEST_SUITE("csv") {
    TEST_CASE("round trip and layout") {
        MetricsRecord a{4.0, 1000, 63000, 120, 480, 0.12, 480.0 / 63000.0, 1.25, 0.1, 0.14, false};
        MetricsRecord b{4.5, 2000, 126000, 101, 300, 0.0505, 300.0 / 126000.0, 1.0, 0.04, 0.06, false};
        const std::vector<MetricsRecord> recs{a, b};
        const auto text = to_csv(recs);
        std::istringstream in(text);
        std::string line;
        int lines = 0;
        while (std::getline(in, line)) ++lines;
        CHECK(lines == 3);
        CHECK(text.rfind(kMetricsCsvHeader, 0) == 0);

        std::istringstream again(text);
        const auto parsed = parse_metrics_csv(again);
        REQUIRE(parsed.size() == 2);
        CHECK(parsed[0].blocks == 1000);
        CHECK(parsed[0].bler == doctest::Approx(0.12));
        CHECK(parsed[0].ber == doctest::Approx(a.ber).epsilon(1e-6));
        CHECK(parsed[1].bler == doctest::Approx(double(parsed[1].block_errors) / double(parsed[1].blocks)));
        CHECK(to_csv(parsed) == text);
    }

    TEST_CASE("export errors") {
        MetricsRecord a{};
        CHECK_THROWS_AS(export_csv({}, "/tmp/ndec_empty.csv"), ConfigError);
        CHECK_THROWS_AS(export_csv(std::vector<MetricsRecord>{a}, "/nonexistent/dir/out.csv"), IoError);
        const auto path = (std::filesystem::temp_directory_path() / "ndec_export.csv").string();
        export_csv(std::vector<MetricsRecord>{a}, path);
        std::ifstream in(path);
        CHECK(parse_metrics_csv(in).size() == 1);
        std::filesystem::remove(path);
        std::istringstream bad("nope\n");
        CHECK_THROWS_AS(parse_metrics_csv(bad), IoError);
    }
}
