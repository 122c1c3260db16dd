#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ndec/bits.hpp"
#include "ndec/inference.hpp"
#include "ndec/linear_code.hpp"
#include "ndec/mlp.hpp"

namespace ndec {

struct DecodeOutcome {
    BitVector c_hat;
    std::size_t iterations_used = 1;
    bool syndrome_zero_exit = false;
    std::vector<std::size_t> flipped_positions;
};

/// Anything that maps a received real vector to a codeword estimate.
/// Implementations are immutable and decode() is reentrant.
class Decoder {
public:
    virtual ~Decoder() = default;
    virtual DecodeOutcome decode(std::span<const double> y) const = 0;
    virtual std::string name() const = 0;
    virtual std::size_t n() const = 0;
};

/// Soft error estimate e~ in [0,1]^n from (syndrome, reliabilities).
class ErrorEstimator {
public:
    virtual ~ErrorEstimator() = default;
    virtual std::size_t input_dim() const = 0;
    virtual std::size_t output_dim() const = 0;
    virtual void estimate(const BitVector& s, std::span<const double> r, std::span<double> e_tilde) const = 0;
};

/// Network-backed estimator evaluated in single precision.
class NetworkEstimator final : public ErrorEstimator {
public:
    explicit NetworkEstimator(const Mlp& model) : net_(model) {}

    std::size_t input_dim() const override { return net_.input_dim(); }
    std::size_t output_dim() const override { return net_.output_dim(); }
    void estimate(const BitVector& s, std::span<const double> r, std::span<double> e_tilde) const override;

private:
    InferenceNet net_;
};

inline constexpr double kDecisionThreshold = 0.5;

/// Syndrome-based neural decoder: c^ = y_b xor 1[e~ > 0.5], skipping the
/// network when the hard decisions already form a codeword.
class SbndDecoder final : public Decoder {
public:
    SbndDecoder(std::shared_ptr<const LinearCode> code, std::shared_ptr<const ErrorEstimator> estimator);

    DecodeOutcome decode(std::span<const double> y) const override;
    std::string name() const override { return "sbnd"; }
    std::size_t n() const override { return code_->n(); }

    const LinearCode& code() const noexcept { return *code_; }
    const std::shared_ptr<const LinearCode>& code_ptr() const noexcept { return code_; }
    const std::shared_ptr<const ErrorEstimator>& estimator() const noexcept { return estimator_; }

private:
    std::shared_ptr<const LinearCode> code_;
    std::shared_ptr<const ErrorEstimator> estimator_;
};

/// Stopping rule for iterative error decimation.
enum class IedStopRule {
    /// Stop only when the hard decisions of the (decimated) received vector
    /// have zero syndrome, or after T iterations.
    hard_decision,
    /// Additionally stop at iteration i < T when the thresholded estimate
    /// y_b xor 1[e~ > 0.5] is a codeword, returning that codeword.
    thresholded_estimate,
};

/// Iterative error decimation on top of any syndrome-based estimator.
///
/// Each of the first T-1 iterations flips the sign of the received value at
/// the position the estimator is most confident is in error (lowest index on
/// ties), leaving |y_j| unchanged, and decodes again. The T-th iteration
/// thresholds at 0.5. Positions may be flipped more than once.
class IedDecoder final : public Decoder {
public:
    IedDecoder(std::shared_ptr<const LinearCode> code, std::shared_ptr<const ErrorEstimator> estimator,
               std::size_t max_iterations, IedStopRule rule = IedStopRule::hard_decision);

    DecodeOutcome decode(std::span<const double> y) const override;
    std::string name() const override;
    std::size_t n() const override { return code_->n(); }
    std::size_t max_iterations() const noexcept { return t_max_; }

private:
    std::shared_ptr<const LinearCode> code_;
    std::shared_ptr<const ErrorEstimator> estimator_;
    std::size_t t_max_;
    IedStopRule rule_;
};

/// First index of the maximum element.
std::size_t argmax_lowest(std::span<const double> values);

/// Hard-decision bounded-distance lookup table: syndrome -> minimum-weight
/// error pattern, for every pattern of weight <= t. Limited to n <= 64.
class BddTable {
public:
    static constexpr std::uint64_t kMaxEntries = 100'000'000;

    explicit BddTable(const LinearCode& code);

    std::size_t size() const noexcept { return keys_.size(); }
    std::size_t radius() const noexcept { return radius_; }

    /// Error pattern (bit i = position i) for a packed syndrome, if present.
    bool lookup(std::uint64_t syndrome, std::uint64_t& pattern) const;

    /// Sum_{i=0..t} C(n, i).
    static std::uint64_t entry_count(std::size_t n, std::size_t t);

private:
    std::size_t radius_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> patterns_;
};

struct BddResult {
    BitVector c_hat;
    bool decoded = false;
};

BddResult bdd_decode(const LinearCode& code, const BddTable& table, const BitVector& y_b);

class BddDecoder final : public Decoder {
public:
    explicit BddDecoder(std::shared_ptr<const LinearCode> code);
    BddDecoder(std::shared_ptr<const LinearCode> code, std::shared_ptr<const BddTable> table);

    DecodeOutcome decode(std::span<const double> y) const override;
    std::string name() const override { return "bdd"; }
    std::size_t n() const override { return code_->n(); }
    const BddTable& table() const noexcept { return *table_; }

private:
    std::shared_ptr<const LinearCode> code_;
    std::shared_ptr<const BddTable> table_;
};

/// Exhaustive maximum-likelihood decoding, k <= 20: the codeword closest to y
/// in Euclidean distance, ties broken by lowest message index (message bit i
/// is bit k-1-i of the index).
class MlDecoder final : public Decoder {
public:
    explicit MlDecoder(std::shared_ptr<const LinearCode> code);

    DecodeOutcome decode(std::span<const double> y) const override;
    std::string name() const override { return "ml"; }
    std::size_t n() const override { return code_->n(); }

private:
    std::shared_ptr<const LinearCode> code_;
    std::vector<BitVector> codewords_;
    std::vector<std::vector<std::uint32_t>> supports_;
};

BitVector ml_decode_bruteforce(const LinearCode& code, std::span<const double> y);

/// Packs a syndrome of at most 64 bits into an integer (bit i = position i).
std::uint64_t pack_syndrome(const BitVector& s);

}  // namespace ndec
