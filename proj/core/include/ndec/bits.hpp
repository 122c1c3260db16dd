#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ndec {

/// Packed binary vector, 64 positions per word. Position i lives in word i/64
/// at bit i%64; unused high bits of the last word are always zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t len);

    /// Parses a string of '0'/'1' characters (other characters rejected).
    static BitVector from_string(std::string_view bits);
    static BitVector from_bits(std::span<const int> bits);

    std::size_t size() const noexcept { return len_; }
    bool empty() const noexcept { return len_ == 0; }

    bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool operator[](std::size_t i) const noexcept { return get(i); }
    void set(std::size_t i, bool v) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    void clear() noexcept;

    std::size_t weight() const noexcept;
    bool is_zero() const noexcept;

    /// Parity of the AND of two equal-length vectors (GF(2) inner product).
    bool dot(const BitVector& other) const noexcept;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector& a, const BitVector& b) = default;

    std::size_t hamming_distance(const BitVector& other) const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    std::string to_string() const;

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Row-major packed binary matrix.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    const BitVector& row(std::size_t r) const;
    BitVector& row(std::size_t r);

    bool get(std::size_t r, std::size_t c) const { return row(r).get(c); }
    void set(std::size_t r, std::size_t c, bool v) { row(r).set(c, v); }

    /// v · Mᵀ (mod 2): one output bit per row, len(v) must equal cols().
    BitVector multiply_transposed(const BitVector& v) const;
    /// u · M (mod 2): XOR of the rows selected by u, len(u) must equal rows().
    BitVector left_multiply(const BitVector& u) const;

    BitMatrix transposed() const;
    std::size_t rank() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

}  // namespace ndec
