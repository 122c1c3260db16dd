#include "ndec/decoders.hpp"

#include <algorithm>
#include <numeric>

#include "ndec/channel.hpp"
#include "ndec/errors.hpp"

namespace ndec {

namespace {

void check_length(std::span<const double> y, std::size_t n) {
    if (y.size() != n) throw DimensionError("received vector has length " + std::to_string(y.size()) + ", expected " + std::to_string(n));
}

void check_estimator(const LinearCode& code, const ErrorEstimator& est) {
    if (est.input_dim() != network_input_dim(code) || est.output_dim() != code.n())
        throw ConfigError("estimator dimensions (" + std::to_string(est.input_dim()) + " -> " +
                          std::to_string(est.output_dim()) + ") do not match " + code.name());
}

BitVector threshold(std::span<const double> e_tilde) {
    BitVector e_hat(e_tilde.size());
    for (std::size_t i = 0; i < e_tilde.size(); ++i)
        if (e_tilde[i] > kDecisionThreshold) e_hat.set(i, true);
    return e_hat;
}

}  // namespace

void NetworkEstimator::estimate(const BitVector& s, std::span<const double> r, std::span<double> e_tilde) const {
    thread_local InferenceNet::Scratch scratch;
    thread_local std::vector<float> input;
    thread_local std::vector<float> output;
    input.resize(net_.input_dim());
    output.resize(net_.output_dim());
    if (s.size() + r.size() != input.size() || e_tilde.size() != output.size())
        throw DimensionError("estimator input does not match the network");
    for (std::size_t i = 0; i < s.size(); ++i) input[i] = s.get(i) ? 1.0f : 0.0f;
    for (std::size_t i = 0; i < r.size(); ++i) input[s.size() + i] = static_cast<float>(r[i]);
    net_.run(input, output, scratch);
    std::copy(output.begin(), output.end(), e_tilde.begin());
}

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw DimensionError("argmax of an empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

SbndDecoder::SbndDecoder(std::shared_ptr<const LinearCode> code, std::shared_ptr<const ErrorEstimator> estimator)
    : code_(std::move(code)), estimator_(std::move(estimator)) {
    check_estimator(*code_, *estimator_);
}

DecodeOutcome SbndDecoder::decode(std::span<const double> y) const {
    const auto n = code_->n();
    check_length(y, n);
    DecodeOutcome out;
    BitVector y_b(n);
    std::vector<double> r(n);
    receiver_front_end(y, y_b, r);
    const auto s = code_->syndrome(y_b);
    if (s.is_zero()) {
        out.c_hat = std::move(y_b);
        out.syndrome_zero_exit = true;
        return out;
    }
    std::vector<double> e_tilde(n);
    estimator_->estimate(s, r, e_tilde);
    out.c_hat = y_b ^ threshold(e_tilde);
    return out;
}

IedDecoder::IedDecoder(std::shared_ptr<const LinearCode> code, std::shared_ptr<const ErrorEstimator> estimator,
                       std::size_t max_iterations, IedStopRule rule)
    : code_(std::move(code)), estimator_(std::move(estimator)), t_max_(max_iterations), rule_(rule) {
    if (t_max_ < 1) throw RangeError("IED needs T >= 1");
    check_estimator(*code_, *estimator_);
}

std::string IedDecoder::name() const {
    return "ied_T" + std::to_string(t_max_) + (rule_ == IedStopRule::thresholded_estimate ? "_est" : "");
}

DecodeOutcome IedDecoder::decode(std::span<const double> y) const {
    const auto n = code_->n();
    check_length(y, n);
    DecodeOutcome out;
    std::vector<double> work(y.begin(), y.end());
    std::vector<double> r(n);
    std::vector<double> e_tilde(n);
    BitVector y_b(n);

    for (std::size_t i = 1; i <= t_max_; ++i) {
        receiver_front_end(work, y_b, r);
        const auto s = code_->syndrome(y_b);
        out.iterations_used = i;
        if (s.is_zero()) {
            out.c_hat = std::move(y_b);
            out.syndrome_zero_exit = true;
            return out;
        }
        estimator_->estimate(s, r, e_tilde);
        if (i < t_max_) {
            if (rule_ == IedStopRule::thresholded_estimate) {
                auto candidate = y_b ^ threshold(e_tilde);
                if (code_->syndrome(candidate).is_zero()) {
                    out.c_hat = std::move(candidate);
                    return out;
                }
            }
            const auto j = argmax_lowest(e_tilde);
            work[j] = -work[j];
            out.flipped_positions.push_back(j);
        }
    }
    out.c_hat = y_b ^ threshold(e_tilde);
    return out;
}

std::uint64_t pack_syndrome(const BitVector& s) {
    if (s.size() > 64) throw CapacityError("syndromes longer than 64 bits are not supported by the lookup table");
    return s.words().empty() ? 0 : s.words()[0];
}

std::uint64_t BddTable::entry_count(std::size_t n, std::size_t t) {
    std::uint64_t total = 0;
    std::uint64_t binom = 1;
    for (std::size_t i = 0; i <= t && i <= n; ++i) {
        total += binom;
        if (total > kMaxEntries) return total;
        binom = binom * (n - i) / (i + 1);
    }
    return total;
}

BddTable::BddTable(const LinearCode& code) : radius_(code.t()) {
    const auto n = code.n();
    if (n > 64) throw CapacityError("lookup-table decoding supports n <= 64");
    const auto entries = entry_count(n, radius_);
    if (entries > kMaxEntries)
        throw CapacityError("lookup table would need " + std::to_string(entries) + " entries (limit 1e8)");

    // Syndrome of a pattern is the XOR of the syndromes of its single-bit errors.
    std::vector<std::uint64_t> column(n);
    for (std::size_t i = 0; i < n; ++i) {
        BitVector unit(n);
        unit.set(i, true);
        column[i] = pack_syndrome(code.syndrome(unit));
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> table;
    table.reserve(static_cast<std::size_t>(entries));
    table.emplace_back(0, 0);
    // Patterns in increasing weight, positions in lexicographic order.
    std::vector<std::size_t> pos;
    for (std::size_t w = 1; w <= radius_ && w <= n; ++w) {
        pos.resize(w);
        std::iota(pos.begin(), pos.end(), 0);
        while (true) {
            std::uint64_t syn = 0;
            std::uint64_t pattern = 0;
            for (auto p : pos) {
                syn ^= column[p];
                pattern |= std::uint64_t{1} << p;
            }
            table.emplace_back(syn, pattern);
            std::size_t j = w;
            while (j > 0 && pos[j - 1] == n - w + (j - 1)) --j;
            if (j == 0) break;
            ++pos[j - 1];
            for (std::size_t q = j; q < w; ++q) pos[q] = pos[q - 1] + 1;
        }
    }

    std::stable_sort(table.begin(), table.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < table.size(); ++i)
        if (table[i].first == table[i - 1].first)
            throw InvariantViolation("two error patterns of weight <= t share a syndrome; declared d_min is wrong");

    keys_.reserve(table.size());
    patterns_.reserve(table.size());
    for (const auto& [key, pattern] : table) {
        keys_.push_back(key);
        patterns_.push_back(pattern);
    }
}

bool BddTable::lookup(std::uint64_t syndrome, std::uint64_t& pattern) const {
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), syndrome);
    if (it == keys_.end() || *it != syndrome) return false;
    pattern = patterns_[static_cast<std::size_t>(it - keys_.begin())];
    return true;
}

BddResult bdd_decode(const LinearCode& code, const BddTable& table, const BitVector& y_b) {
    if (y_b.size() != code.n()) throw DimensionError("hard-decision word must have length n");
    BddResult result{y_b, false};
    std::uint64_t pattern = 0;
    if (table.lookup(pack_syndrome(code.syndrome(y_b)), pattern)) {
        result.c_hat.words()[0] ^= pattern;
        result.decoded = true;
    }
    return result;
}

BddDecoder::BddDecoder(std::shared_ptr<const LinearCode> code)
    : code_(std::move(code)), table_(std::make_shared<const BddTable>(*code_)) {}

BddDecoder::BddDecoder(std::shared_ptr<const LinearCode> code, std::shared_ptr<const BddTable> table)
    : code_(std::move(code)), table_(std::move(table)) {}

DecodeOutcome BddDecoder::decode(std::span<const double> y) const {
    const auto n = code_->n();
    check_length(y, n);
    BitVector y_b(n);
    std::vector<double> r(n);
    receiver_front_end(y, y_b, r);
    DecodeOutcome out;
    out.syndrome_zero_exit = code_->syndrome(y_b).is_zero();
    out.c_hat = bdd_decode(*code_, *table_, y_b).c_hat;
    return out;
}

MlDecoder::MlDecoder(std::shared_ptr<const LinearCode> code) : code_(std::move(code)) {
    const auto k = code_->k();
    if (k > kMaxEnumerationDimension)
        throw CapacityError("maximum-likelihood enumeration refused for k = " + std::to_string(k) + " > 20");
    const std::uint64_t count = std::uint64_t{1} << k;
    codewords_.reserve(static_cast<std::size_t>(count));
    supports_.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t index = 0; index < count; ++index) {
        BitVector u(k);
        for (std::size_t i = 0; i < k; ++i)
            if ((index >> (k - 1 - i)) & 1u) u.set(i, true);
        auto c = code_->encode(u);
        std::vector<std::uint32_t> support;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c.get(i)) support.push_back(static_cast<std::uint32_t>(i));
        codewords_.push_back(std::move(c));
        supports_.push_back(std::move(support));
    }
}

DecodeOutcome MlDecoder::decode(std::span<const double> y) const {
    check_length(y, code_->n());
    // ||y - (1 - 2c)||^2 = const + 4 * sum_{i in supp(c)} y_i
    std::size_t best = 0;
    double best_metric = 0.0;
    for (std::size_t idx = 0; idx < supports_.size(); ++idx) {
        double metric = 0.0;
        for (auto i : supports_[idx]) metric += y[i];
        if (idx == 0 || metric < best_metric) {
            best_metric = metric;
            best = idx;
        }
    }
    DecodeOutcome out;
    out.c_hat = codewords_[best];
    return out;
}

BitVector ml_decode_bruteforce(const LinearCode& code, std::span<const double> y) {
    const MlDecoder decoder(std::make_shared<const LinearCode>(code));
    return decoder.decode(y).c_hat;
}

}  // namespace ndec
