#include "ndec/channel.hpp"

#include <cmath>

#include "ndec/errors.hpp"

namespace ndec {

double sigma_from_ebn0(double ebn0_db, double rate, NoiseMode mode) {
    if (!(rate > 0.0) || rate > 1.0) throw RangeError("code rate must lie in (0, 1]");
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    const double scale = mode == NoiseMode::rate_normalized ? rate : 1.0;
    return 1.0 / std::sqrt(2.0 * scale * ebn0);
}

void receiver_front_end(std::span<const double> y, BitVector& y_b, std::span<double> r) {
    if (y_b.size() != y.size() || r.size() != y.size()) throw DimensionError("front-end buffers do not match y");
    y_b.clear();
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) y_b.set(i, true);
        r[i] = std::abs(y[i]);
    }
}

ChannelRow transmit_with_noise(const LinearCode& code, const BitVector& c, std::span<const double> z) {
    const auto n = code.n();
    if (c.size() != n || z.size() != n) throw DimensionError("codeword and noise must have length n");
    ChannelRow row;
    row.c = c;
    row.z.assign(z.begin(), z.end());
    row.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) row.y[i] = (c.get(i) ? -1.0 : 1.0) + z[i];
    row.y_b = BitVector(n);
    row.r.resize(n);
    receiver_front_end(row.y, row.y_b, row.r);
    row.e = row.y_b ^ c;
    row.s = code.syndrome(row.y_b);
    return row;
}

ChannelRow transmit(const LinearCode& code, const BitVector& c, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw RangeError("noise standard deviation must be positive");
    std::vector<double> z(code.n());
    for (auto& v : z) v = sigma * rng.normal();
    return transmit_with_noise(code, c, z);
}

void transmit_into(const BitVector& c, double sigma, Rng& rng, std::span<double> out) {
    if (c.size() != out.size()) throw DimensionError("output buffer must have length n");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (c.get(i) ? -1.0 : 1.0) + sigma * rng.normal();
}

ChannelBatch transmit_batch(const LinearCode& code, std::span<const BitVector> codewords, double sigma, Rng& rng) {
    ChannelBatch batch;
    batch.reserve(codewords.size());
    for (const auto& c : codewords) batch.push_back(transmit(code, c, sigma, rng));
    return batch;
}

void make_network_input(const BitVector& s, std::span<const double> r, std::span<double> out) {
    if (out.size() != s.size() + r.size()) throw DimensionError("network input buffer has the wrong width");
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s.get(i) ? 1.0 : 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) out[s.size() + i] = r[i];
}

TrainingBatch make_training_batch(const LinearCode& code, double sigma, std::size_t batch, Rng& rng) {
    if (batch < 1) throw RangeError("batch size must be >= 1");
    if (!(sigma > 0.0)) throw RangeError("noise standard deviation must be positive");
    const auto n = code.n();
    const auto nk = code.redundancy();
    TrainingBatch out{Tensor2(static_cast<Eigen::Index>(batch), static_cast<Eigen::Index>(nk + n)),
                      Tensor2(static_cast<Eigen::Index>(batch), static_cast<Eigen::Index>(n))};

    BitVector y_b(n);
    std::vector<double> y(n);
    std::vector<double> r(n);
    for (std::size_t b = 0; b < batch; ++b) {
        // c = 0, so y = 1 + z and e = y_b.
        for (auto& v : y) v = 1.0 + sigma * rng.normal();
        receiver_front_end(y, y_b, r);
        const auto s = code.syndrome(y_b);
        const auto row = static_cast<Eigen::Index>(b);
        make_network_input(s, r, std::span<double>(out.inputs.row(row).data(), nk + n));
        for (std::size_t i = 0; i < n; ++i)
            out.targets(row, static_cast<Eigen::Index>(i)) = y_b.get(i) ? 1.0 : 0.0;
    }
    return out;
}

}  // namespace ndec
