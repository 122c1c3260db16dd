#include <doctest.h>

#include <cmath>
#include <memory>

#include "../support/oracles.hpp"
#include "ndec/architectures.hpp"
#include "ndec/channel.hpp"
#include "ndec/decoders.hpp"
#include "ndec/errors.hpp"

using namespace ndec;

namespace {

const std::vector<double> kExampleEstimate{0.479, 0.505, 0.512, 0.491, 0.005, 0.507, 0.000, 0.516,
                                         0.481, 0.000, 0.000, 0.483, 0.002, 0.001, 0.000};

// Returns the same soft estimate for every input.
class FixedEstimator final : public ErrorEstimator {
public:
    FixedEstimator(std::size_t in, std::vector<double> values) : in_(in), values_(std::move(values)) {}
    std::size_t input_dim() const override { return in_; }
    std::size_t output_dim() const override { return values_.size(); }
    void estimate(const BitVector&, std::span<const double>, std::span<double> e) const override {
        std::copy(values_.begin(), values_.end(), e.begin());
    }

private:
    std::size_t in_;
    std::vector<double> values_;
};

// Wraps another estimator and records every (s, r) it is asked about.
class RecordingEstimator final : public ErrorEstimator {
public:
    explicit RecordingEstimator(std::shared_ptr<const ErrorEstimator> inner) : inner_(std::move(inner)) {}
    std::size_t input_dim() const override { return inner_->input_dim(); }
    std::size_t output_dim() const override { return inner_->output_dim(); }
    void estimate(const BitVector& s, std::span<const double> r, std::span<double> e) const override {
        calls.emplace_back(s, std::vector<double>(r.begin(), r.end()));
        inner_->estimate(s, r, e);
    }
    mutable std::vector<std::pair<BitVector, std::vector<double>>> calls;

private:
    std::shared_ptr<const ErrorEstimator> inner_;
};

std::shared_ptr<const LinearCode> shared_code(unsigned m, unsigned t) {
    return std::make_shared<const LinearCode>(bch_construct(m, t));
}

std::shared_ptr<const ErrorEstimator> random_network(const LinearCode& code, std::uint64_t seed) {
    Rng rng(seed);
    CustomArchitecture arch{{32, 32}, LayerKind::relu, false, std::nullopt};
    return std::make_shared<const NetworkEstimator>(build_architecture(code, Variant::custom, rng, arch));
}

std::vector<double> noisy_codeword(const LinearCode& code, const BitVector& c, double sigma, Rng& rng) {
    std::vector<double> y(code.n());
    for (std::size_t i = 0; i < code.n(); ++i) y[i] = (c.get(i) ? -1.0 : 1.0) + sigma * rng.normal();
    return y;
}

BitVector random_message(std::size_t k, Rng& rng) {
    BitVector u(k);
    for (std::size_t i = 0; i < k; ++i) u.set(i, rng.bit());
    return u;
}

BitVector hard(std::span<const double> y) {
    BitVector b(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) b.set(i, y[i] < 0.0);
    return b;
}

}  // namespace

TEST_SUITE("sbnd") {
    TEST_CASE("example soft estimate thresholds to the stated error estimate") {
        const auto code = shared_code(4, 3);
        const SbndDecoder dec(code, std::make_shared<FixedEstimator>(25, kExampleEstimate));
        std::vector<double> y(15, 1.0);
        y[0] = -0.3;  // nonzero syndrome so the estimator runs
        const auto out = dec.decode(y);
        CHECK_FALSE(out.syndrome_zero_exit);
        CHECK((out.c_hat ^ hard(y)).to_string() == "011001010000000");
    }

    TEST_CASE("noiseless input exits on the syndrome check") {
        const auto code = shared_code(4, 3);
        const SbndDecoder dec(code, std::make_shared<FixedEstimator>(25, kExampleEstimate));
        Rng rng(1);
        const auto c = code->encode(random_message(5, rng));
        const auto out = dec.decode(noisy_codeword(*code, c, 0.0, rng));
        CHECK(out.syndrome_zero_exit);
        CHECK(out.c_hat == c);
    }

    TEST_CASE("c_hat xor y_b is the thresholded estimate") {
        const auto code = shared_code(4, 3);
        const auto est = random_network(*code, 2);
        const SbndDecoder dec(code, est);
        Rng rng(3);
        std::vector<double> e(15);
        for (int trial = 0; trial < 500; ++trial) {
            const auto y = noisy_codeword(*code, BitVector(15), 0.9, rng);
            const auto y_b = hard(y);
            const auto out = dec.decode(y);
            BitVector e_hat(15);
            const auto s = code->syndrome(y_b);
            if (!s.is_zero()) {
                std::vector<double> r(15);
                for (std::size_t i = 0; i < 15; ++i) r[i] = std::abs(y[i]);
                est->estimate(s, r, e);
                for (std::size_t i = 0; i < 15; ++i) e_hat.set(i, e[i] > 0.5);
            }
            REQUIRE((out.c_hat ^ y_b) == e_hat);
        }
    }

    TEST_CASE("mismatched estimator or input length") {
        const auto code = shared_code(4, 3);
        CHECK_THROWS_AS(SbndDecoder(code, std::make_shared<FixedEstimator>(24, kExampleEstimate)), ConfigError);
        CHECK_THROWS_AS(SbndDecoder(shared_code(6, 3), random_network(*code, 4)), ConfigError);
        const SbndDecoder dec(code, std::make_shared<FixedEstimator>(25, kExampleEstimate));
        CHECK_THROWS_AS(dec.decode(std::vector<double>(14, 1.0)), DimensionError);
    }
}

TEST_SUITE("ied") {
    TEST_CASE("argmax breaks ties toward the lowest index") {
        CHECK(argmax_lowest(kExampleEstimate) == 7);
        CHECK(argmax_lowest(std::vector<double>{0.2, 0.9, 0.9, 0.1}) == 1);
        CHECK(argmax_lowest(std::vector<double>{0.0, 0.0}) == 0);
        CHECK_THROWS_AS(argmax_lowest(std::vector<double>{}), DimensionError);
    }

    TEST_CASE("example estimate flips position 8 first") {
        const auto code = shared_code(4, 3);
        const IedDecoder dec(code, std::make_shared<FixedEstimator>(25, kExampleEstimate), 2);
        std::vector<double> y(15, 1.0);
        y[0] = -0.3;
        const auto out = dec.decode(y);
        REQUIRE_FALSE(out.flipped_positions.empty());
        CHECK(out.flipped_positions.front() == 7);
    }

    TEST_CASE("T = 1 equals SBND on random inputs") {
        const auto code = shared_code(4, 3);
        const auto est = random_network(*code, 5);
        const SbndDecoder sbnd(code, est);
        const IedDecoder ied(code, est, 1);
        Rng rng(6);
        for (int trial = 0; trial < 10000; ++trial) {
            const auto c = code->encode(random_message(5, rng));
            const auto y = noisy_codeword(*code, c, 0.8, rng);
            const auto a = sbnd.decode(y);
            const auto b = ied.decode(y);
            REQUIRE(a.c_hat == b.c_hat);
            REQUIRE(b.iterations_used == 1);
            REQUIRE(b.flipped_positions.empty());
        }
    }

    TEST_CASE("zero syndrome at entry returns immediately") {
        const auto code = shared_code(4, 3);
        const IedDecoder dec(code, random_network(*code, 7), 5);
        Rng rng(8);
        const auto c = code->encode(random_message(5, rng));
        const auto out = dec.decode(noisy_codeword(*code, c, 0.0, rng));
        CHECK(out.iterations_used == 1);
        CHECK(out.c_hat == c);
        CHECK(out.syndrome_zero_exit);
        CHECK(out.flipped_positions.empty());
    }

    TEST_CASE("each iteration flips one sign and keeps every magnitude") {
        const auto code = shared_code(4, 3);
        Rng rng(9);
        for (auto rule : {IedStopRule::hard_decision, IedStopRule::thresholded_estimate}) {
            for (int trial = 0; trial < 300; ++trial) {
                auto recorder = std::make_shared<RecordingEstimator>(random_network(*code, 10));
                const IedDecoder dec(code, recorder, 6, rule);
                const auto y = noisy_codeword(*code, BitVector(15), 1.0, rng);
                const auto out = dec.decode(y);
                REQUIRE(out.iterations_used <= 6);
                REQUIRE(out.iterations_used >= 1);
                const auto& calls = recorder->calls;
                for (const auto& [s, r] : calls)
                    for (std::size_t i = 0; i < 15; ++i) REQUIRE(r[i] == std::abs(y[i]));
                // Flips reproduce the hard decisions seen at each call.
                REQUIRE(out.flipped_positions.size() + 1 >= calls.size());
                BitVector y_b = hard(y);
                for (std::size_t c = 0; c < calls.size(); ++c) {
                    REQUIRE(calls[c].first == code->syndrome(y_b));
                    if (c < out.flipped_positions.size()) y_b.flip(out.flipped_positions[c]);
                }
                if (out.syndrome_zero_exit) {
                    REQUIRE(code->syndrome(out.c_hat).is_zero());
                    REQUIRE(out.c_hat == y_b);
                }
            }
        }
    }

    TEST_CASE("thresholded-estimate rule returns a codeword when it stops early") {
        const auto code = shared_code(4, 3);
        const auto est = random_network(*code, 11);
        const IedDecoder dec(code, est, 5, IedStopRule::thresholded_estimate);
        CHECK(dec.name() == "ied_T5_est");
        CHECK(IedDecoder(code, est, 3).name() == "ied_T3");
        Rng rng(12);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto out = dec.decode(noisy_codeword(*code, BitVector(15), 0.9, rng));
            if (out.iterations_used < 5) REQUIRE(code->syndrome(out.c_hat).is_zero());
        }
    }

    TEST_CASE("invalid T") {
        const auto code = shared_code(4, 3);
        CHECK_THROWS_AS(IedDecoder(code, random_network(*code, 13), 0), RangeError);
    }
}

TEST_SUITE("bdd") {
    TEST_CASE("table sizes") {
        CHECK(BddTable(bch_construct(4, 3)).size() == 576);
        CHECK(BddTable(bch_construct(6, 3)).size() == 41728);
        CHECK(BddTable::entry_count(63, 5) == 7666240);
        for (unsigned t = 0; t <= 5; ++t) {
            std::uint64_t sum = 0;
            for (unsigned i = 0; i <= t; ++i) sum += testing::binomial(63, i);
            CHECK(BddTable::entry_count(63, t) == sum);
        }
    }

    TEST_CASE("capacity and injectivity guards") {
        CHECK_THROWS_AS(BddTable(bch_construct(7, 2)), CapacityError);
        // BCH(15,7) has d_min 5; declaring 7 makes weight-3 patterns collide.
        const auto real = bch_construct(4, 2);
        const LinearCode wrong(real.generator(), real.parity_check(), 7);
        CHECK_THROWS_AS(BddTable{wrong}, InvariantViolation);
    }

    TEST_CASE("every pattern of weight <= t is corrected on BCH(63,45)") {
        const auto code = bch_construct(6, 3);
        const BddTable table(code);
        Rng rng(14);
        for (int trial = 0; trial < 10000; ++trial) {
            const auto c = code.encode(random_message(code.k(), rng));
            BitVector e(code.n());
            const std::size_t w = trial % 4;
            while (e.weight() < w) e.set(rng.next_u64() % code.n(), true);
            const auto res = bdd_decode(code, table, c ^ e);
            REQUIRE(res.decoded);
            REQUIRE(res.c_hat == c);
            REQUIRE(code.syndrome(res.c_hat).is_zero());
        }
    }

    TEST_CASE("a weight t+1 pattern outside the table is not decoded") {
        const auto code = bch_construct(6, 3);
        const BddTable table(code);
        Rng rng(15);
        bool found = false;
        for (int trial = 0; trial < 1000 && !found; ++trial) {
            BitVector e(code.n());
            while (e.weight() < 4) e.set(rng.next_u64() % code.n(), true);
            std::uint64_t pattern = 0;
            if (table.lookup(pack_syndrome(code.syndrome(e)), pattern)) continue;
            const auto res = bdd_decode(code, table, e);
            CHECK_FALSE(res.decoded);
            CHECK(res.c_hat == e);
            found = true;
        }
        CHECK(found);
    }

    TEST_CASE("decoder interface") {
        const auto code = shared_code(4, 3);
        const BddDecoder dec(code);
        Rng rng(16);
        const auto c = code->encode(random_message(5, rng));
        auto y = noisy_codeword(*code, c, 0.0, rng);
        CHECK(dec.decode(y).c_hat == c);
        y[3] = -y[3];
        y[9] = -y[9];
        CHECK(dec.decode(y).c_hat == c);
    }
}

TEST_SUITE("ml") {
    TEST_CASE("noiseless and tie-break") {
        const auto code = shared_code(4, 3);
        const MlDecoder dec(code);
        Rng rng(17);
        for (int trial = 0; trial < 32; ++trial) {
            const auto c = code->encode(random_message(5, rng));
            CHECK(dec.decode(noisy_codeword(*code, c, 0.0, rng)).c_hat == c);
        }
        // All-zero observation: every codeword ties, index 0 (the zero word) wins.
        CHECK(dec.decode(std::vector<double>(15, 0.0)).c_hat.is_zero());
        CHECK_THROWS_AS(MlDecoder(shared_code(6, 3)), CapacityError);
    }

    TEST_CASE("matches Euclidean brute force") {
        const auto code = shared_code(4, 2);
        const MlDecoder dec(code);
        Rng rng(18);
        for (int trial = 0; trial < 500; ++trial) {
            const auto y = noisy_codeword(*code, code->encode(random_message(code->k(), rng)), 1.0, rng);
            const auto fast = dec.decode(y).c_hat;
            // Independent check: squared distance of the chosen word is minimal.
            auto dist = [&](const BitVector& c) {
                double d = 0.0;
                for (std::size_t i = 0; i < 15; ++i) d += std::pow(y[i] - (c.get(i) ? -1.0 : 1.0), 2);
                return d;
            };
            const double best = dist(fast);
            for (unsigned idx = 0; idx < (1u << code->k()); ++idx) {
                BitVector u(code->k());
                for (std::size_t i = 0; i < code->k(); ++i) u.set(i, (idx >> i) & 1u);
                REQUIRE(dist(code->encode(u)) >= best - 1e-9);
            }
            REQUIRE(ml_decode_bruteforce(*code, y) == fast);
        }
    }

    TEST_CASE("ML agrees with BDD inside the decoding sphere") {
        const auto code = shared_code(4, 3);
        const MlDecoder ml(code);
        const BddDecoder bdd(code);
        Rng rng(19);
        int checked = 0;
        while (checked < 10000) {
            const auto c = code->encode(random_message(5, rng));
            const auto y = noisy_codeword(*code, c, 0.45, rng);
            if ((hard(y) ^ c).weight() > 3) continue;
            REQUIRE(ml.decode(y).c_hat == bdd.decode(y).c_hat);
            ++checked;
        }
    }
}
