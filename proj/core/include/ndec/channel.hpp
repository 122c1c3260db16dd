#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ndec/bits.hpp"
#include "ndec/linear_code.hpp"
#include "ndec/rng.hpp"
#include "ndec/tensor.hpp"

namespace ndec {

enum class NoiseMode {
    literal,          // sigma^2 = N0 / (2 Eb), no rate factor
    rate_normalized,  // sigma^2 = N0 / (2 R Eb)
};

double sigma_from_ebn0(double ebn0_db, double rate, NoiseMode mode);

struct NoiseModel {
    double ebn0_db = 0.0;
    double rate = 1.0;
    NoiseMode mode = NoiseMode::rate_normalized;

    double sigma() const { return sigma_from_ebn0(ebn0_db, rate, mode); }
};

/// One BI-AWGN transmission with every derived quantity the decoders use.
struct ChannelRow {
    BitVector c;               // transmitted codeword
    std::vector<double> z;     // noise
    std::vector<double> y;     // 1 - 2c + z
    BitVector y_b;             // hard decisions 1[y < 0]
    BitVector e;               // y_b xor c
    BitVector s;               // e H^T = y_b H^T
    std::vector<double> r;     // |y|
};

using ChannelBatch = std::vector<ChannelRow>;

/// Hard decisions and reliabilities. y_i = 0 maps to hard decision 0.
void receiver_front_end(std::span<const double> y, BitVector& y_b, std::span<double> r);

/// Fills every field of a row from a codeword and an explicit noise vector.
ChannelRow transmit_with_noise(const LinearCode& code, const BitVector& c, std::span<const double> z);

/// Samples z ~ N(0, sigma^2 I) and returns the populated row.
ChannelRow transmit(const LinearCode& code, const BitVector& c, double sigma, Rng& rng);

/// Writes y = 1 - 2c + z into out, drawing z from rng.
void transmit_into(const BitVector& c, double sigma, Rng& rng, std::span<double> out);

ChannelBatch transmit_batch(const LinearCode& code, std::span<const BitVector> codewords, double sigma, Rng& rng);

/// Network input for one received word: [s as 0/1 reals | |y|].
void make_network_input(const BitVector& s, std::span<const double> r, std::span<double> out);

struct TrainingBatch {
    Tensor2 inputs;   // batch x ((n-k) + n)
    Tensor2 targets;  // batch x n, error bits as 0/1
};

/// Fresh zero-codeword examples: every call draws new noise.
TrainingBatch make_training_batch(const LinearCode& code, double sigma, std::size_t batch, Rng& rng);

inline std::size_t network_input_dim(const LinearCode& code) { return code.redundancy() + code.n(); }

}  // namespace ndec
