#include "ndec/bits.hpp"

#include <algorithm>

#include "ndec/errors.hpp"

namespace ndec {

BitVector::BitVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i, true);
        else if (bits[i] != '0')
            throw RangeError("bit string may only contain '0' and '1'");
    }
    return v;
}

BitVector BitVector::from_bits(std::span<const int> bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) throw RangeError("bit values must be 0 or 1");
        v.set(i, bits[i] == 1);
    }
    return v;
}

void BitVector::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitVector::weight() const noexcept {
    std::size_t w = 0;
    for (auto word : words_) w += static_cast<std::size_t>(std::popcount(word));
    return w;
}

bool BitVector::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool BitVector::dot(const BitVector& other) const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.len_ != len_) throw DimensionError("xor of bit vectors with different lengths");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

std::size_t BitVector::hamming_distance(const BitVector& other) const {
    if (other.len_ != len_) throw DimensionError("distance between bit vectors with different lengths");
    std::size_t d = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
        d += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
    return d;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

const BitVector& BitMatrix::row(std::size_t r) const {
    if (r >= rows_.size()) throw RangeError("matrix row out of bounds");
    return rows_[r];
}

BitVector& BitMatrix::row(std::size_t r) {
    if (r >= rows_.size()) throw RangeError("matrix row out of bounds");
    return rows_[r];
}

BitVector BitMatrix::multiply_transposed(const BitVector& v) const {
    if (v.size() != cols_) throw DimensionError("vector length does not match matrix columns");
    BitVector out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (rows_[r].dot(v)) out.set(r, true);
    return out;
}

BitVector BitMatrix::left_multiply(const BitVector& u) const {
    if (u.size() != rows_.size()) throw DimensionError("vector length does not match matrix rows");
    BitVector out(cols_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (u.get(r)) out ^= rows_[r];
    return out;
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(cols_, rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (rows_[r].get(c)) t.rows_[c].set(r, true);
    return t;
}

std::size_t BitMatrix::rank() const {
    auto work = rows_;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < work.size(); ++c) {
        auto pivot = std::find_if(work.begin() + static_cast<std::ptrdiff_t>(rank), work.end(),
                                  [c](const BitVector& r) { return r.get(c); });
        if (pivot == work.end()) continue;
        std::swap(*pivot, work[rank]);
        for (std::size_t r = 0; r < work.size(); ++r)
            if (r != rank && work[r].get(c)) work[r] ^= work[rank];
        ++rank;
    }
    return rank;
}

}  // namespace ndec
