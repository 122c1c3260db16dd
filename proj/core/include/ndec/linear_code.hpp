#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "ndec/bits.hpp"
#include "ndec/gf2m.hpp"

namespace ndec {

/// Binary (n, k) linear block code.
///
/// Bit-order convention for cyclic codes: vector position 0 carries the
/// coefficient of x^(n-1), position n-1 the constant term. G is systematic
/// [I_k | P] and H = [P^T | I_(n-k)], so the syndrome of v equals the
/// coefficients of v(x) mod g(x), highest degree first.
class LinearCode {
public:
    /// Builds a code from an explicit generator and parity-check pair.
    /// Checks G·H^T = 0 and full rank of both matrices. When d_min is not
    /// supplied and k is small enough it is computed by enumeration.
    LinearCode(BitMatrix generator, BitMatrix parity_check, std::optional<std::size_t> d_min = std::nullopt,
               std::string name = {});

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t redundancy() const noexcept { return n_ - k_; }
    std::size_t d_min() const noexcept { return d_min_; }
    /// Guaranteed correction radius floor((d_min - 1) / 2).
    std::size_t t() const noexcept { return (d_min_ - 1) / 2; }
    double rate() const noexcept { return static_cast<double>(k_) / static_cast<double>(n_); }

    const BitMatrix& generator() const noexcept { return g_; }
    const BitMatrix& parity_check() const noexcept { return h_; }
    const std::string& name() const noexcept { return name_; }

    /// Generator polynomial, present for cyclic codes built by bch_construct.
    const std::optional<Gf2Poly>& generator_poly() const noexcept { return gen_poly_; }
    /// Designed correction capability for BCH codes.
    std::optional<std::size_t> design_t() const noexcept { return design_t_; }

    BitVector encode(const BitVector& message) const;
    BitVector syndrome(const BitVector& word) const;

private:
    friend LinearCode bch_construct(unsigned m, unsigned t_design);

    std::size_t n_;
    std::size_t k_;
    std::size_t d_min_;
    BitMatrix g_;
    BitMatrix h_;
    std::string name_;
    std::optional<Gf2Poly> gen_poly_;
    std::optional<std::size_t> design_t_;
};

/// Largest dimension accepted by exhaustive codeword enumeration.
inline constexpr std::size_t kMaxEnumerationDimension = 20;

/// Primitive narrow-sense binary BCH code of length 2^m - 1 whose generator
/// is lcm of the minimal polynomials of alpha^1 .. alpha^(2 t_design).
/// d_min is brute-forced when k <= 20, otherwise the design distance is used.
LinearCode bch_construct(unsigned m, unsigned t_design);

/// lcm of the minimal polynomials of alpha^1 .. alpha^(2 t_design).
Gf2Poly bch_generator_poly(const Gf2mField& field, unsigned t_design);

/// Reduces the k shifted copies of g(x) to the systematic form [I_k | P].
BitMatrix systematic_generator_from_poly(const Gf2Poly& g, std::size_t n);

/// Polynomial reading of a length-n vector under the position-0-is-x^(n-1) convention.
Gf2Poly word_to_poly(const BitVector& word);

/// Minimum nonzero codeword weight by Gray-code enumeration, k <= 20.
std::size_t min_distance_bruteforce(const BitMatrix& generator);
inline std::size_t min_distance_bruteforce(const LinearCode& code) {
    return min_distance_bruteforce(code.generator());
}

/// Multi-line text descriptor: n, k, d_min, t, g(x), H rows as 0/1 strings.
std::string describe(const LinearCode& code);

}  // namespace ndec
