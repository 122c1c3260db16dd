#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "ndec/channel.hpp"
#include "ndec/errors.hpp"

using namespace ndec;

TEST_SUITE("channel") {
    TEST_CASE("sigma from Eb/N0") {
        CHECK(sigma_from_ebn0(0.0, 1.0, NoiseMode::literal) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(sigma_from_ebn0(4.0, 1.0, NoiseMode::literal) == doctest::Approx(0.4461542169).epsilon(1e-9));
        CHECK(sigma_from_ebn0(4.0, 0.3, NoiseMode::literal) == doctest::Approx(0.4461542169).epsilon(1e-9));
        CHECK(sigma_from_ebn0(4.0, 45.0 / 63.0, NoiseMode::rate_normalized) ==
              doctest::Approx(0.5278967886).epsilon(1e-9));
        CHECK_THROWS_AS(sigma_from_ebn0(4.0, 0.0, NoiseMode::literal), RangeError);
        CHECK_THROWS_AS(sigma_from_ebn0(4.0, -0.5, NoiseMode::rate_normalized), RangeError);
        const NoiseModel model{4.0, 45.0 / 63.0, NoiseMode::rate_normalized};
        CHECK(model.sigma() > 0.0);
    }

    TEST_CASE("front end uses a strict sign test") {
        const std::vector<double> y{0.3, -0.2, 0.0, -0.0};
        BitVector y_b(4);
        std::vector<double> r(4);
        receiver_front_end(y, y_b, r);
        CHECK(y_b.to_string() == "0100");
        CHECK(r[0] == 0.3);
        CHECK(r[1] == 0.2);
        CHECK(r[2] == 0.0);
    }

    TEST_CASE("noiseless transmission") {
        const auto code = bch_construct(4, 3);
        const std::vector<double> zero(15, 0.0);

        const auto row0 = transmit_with_noise(code, BitVector(15), zero);
        for (double v : row0.y) CHECK(v == 1.0);
        CHECK(row0.y_b.is_zero());

        BitVector ones(15);
        for (std::size_t i = 0; i < 15; ++i) ones.set(i, true);
        const auto row1 = transmit_with_noise(code, ones, zero);
        for (double v : row1.y) CHECK(v == -1.0);
        CHECK(row1.y_b == ones);
        CHECK(row1.e.is_zero());
        CHECK(row1.s.is_zero());

        BitVector u(5);
        u.set(1, true);
        u.set(3, true);
        const auto c = code.encode(u);
        CHECK(transmit_with_noise(code, c, zero).y_b == c);
    }

    TEST_CASE("row invariants hold under noise") {
        const auto code = bch_construct(6, 3);
        Rng rng(7);
        BitVector u(code.k());
        for (int trial = 0; trial < 200; ++trial) {
            for (std::size_t i = 0; i < code.k(); ++i) u.set(i, rng.bit());
            const auto c = code.encode(u);
            const auto row = transmit(code, c, 0.8, rng);
            for (std::size_t i = 0; i < code.n(); ++i) {
                CHECK(row.y[i] == (c.get(i) ? -1.0 : 1.0) + row.z[i]);
                CHECK(row.y_b.get(i) == (row.y[i] < 0.0));
                CHECK(row.r[i] == std::abs(row.y[i]));
            }
            CHECK(row.e == (row.y_b ^ c));
            CHECK(row.s == code.syndrome(row.e));
            CHECK(row.s == code.syndrome(row.y_b));
        }
    }

    TEST_CASE("noise moments at sigma = 0.5") {
        Rng rng(2024);
        const int count = 1'000'000;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < count; ++i) {
            const double z = 0.5 * rng.normal();
            sum += z;
            sum_sq += z * z;
        }
        const double mean = sum / count;
        const double var = sum_sq / count - mean * mean;
        CHECK(mean > -0.002);
        CHECK(mean < 0.002);
        CHECK(var > 0.2485);
        CHECK(var < 0.2515);
    }

    TEST_CASE("raw hard-decision error rate matches Q(1/sigma)") {
        const double sigma = sigma_from_ebn0(4.0, 1.0, NoiseMode::literal);
        const double p = testing::q_function(1.0 / sigma);
        Rng rng(77);
        const int count = 1'000'000;
        int errors = 0;
        for (int i = 0; i < count; ++i)
            if (1.0 + sigma * rng.normal() < 0.0) ++errors;
        const double sd = std::sqrt(count * p * (1.0 - p));
        CHECK(std::abs(errors - count * p) < 3.0 * sd);
    }

    TEST_CASE("training batches") {
        const auto code = bch_construct(6, 3);
        const double sigma = sigma_from_ebn0(4.0, code.rate(), NoiseMode::rate_normalized);
        Rng rng(1);
        const auto batch = make_training_batch(code, sigma, 256, rng);
        CHECK(batch.inputs.cols() == 81);
        CHECK(batch.targets.cols() == 63);
        CHECK(network_input_dim(bch_construct(6, 5)) == 90);

        for (Eigen::Index b = 0; b < batch.inputs.rows(); ++b) {
            BitVector e(63);
            for (Eigen::Index i = 0; i < 63; ++i) {
                const double t = batch.targets(b, i);
                REQUIRE((t == 0.0 || t == 1.0));
                e.set(static_cast<std::size_t>(i), t == 1.0);
                CHECK(batch.inputs(b, 18 + i) >= 0.0);
            }
            // With c = 0, e = y_b; recomputing s from it must give the stored bits.
            const auto s = code.syndrome(e);
            for (Eigen::Index j = 0; j < 18; ++j) CHECK(batch.inputs(b, j) == (s.get(static_cast<std::size_t>(j)) ? 1.0 : 0.0));
        }

        // Fresh noise per call; identical seeds reproduce bit-identical batches.
        const auto again = make_training_batch(code, sigma, 256, rng);
        CHECK(again.inputs != batch.inputs);
        Rng a(42), b(42);
        CHECK(make_training_batch(code, sigma, 64, a).inputs == make_training_batch(code, sigma, 64, b).inputs);
        CHECK_THROWS_AS(make_training_batch(code, sigma, 0, rng), RangeError);
    }
}
