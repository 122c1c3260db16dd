#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace ndec {

/// Polynomial over GF(2). Coefficient i multiplies x^i; the representation is
/// kept trimmed so the highest stored coefficient is 1 (or empty for zero).
class Gf2Poly {
public:
    Gf2Poly() = default;
    /// Builds the polynomial with a 1 at each listed exponent.
    static Gf2Poly from_exponents(std::initializer_list<unsigned> exponents);
    static Gf2Poly from_exponents(const std::vector<unsigned>& exponents);
    /// Bit i of mask is the coefficient of x^i.
    static Gf2Poly from_mask(std::uint64_t mask);
    static Gf2Poly monomial(unsigned degree);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool coeff(unsigned i) const noexcept { return i < coeffs_.size() && coeffs_[i] != 0; }

    Gf2Poly operator*(const Gf2Poly& other) const;
    Gf2Poly operator+(const Gf2Poly& other) const;
    Gf2Poly operator%(const Gf2Poly& divisor) const;
    bool divides(const Gf2Poly& other) const { return (other % *this).is_zero(); }

    friend bool operator==(const Gf2Poly&, const Gf2Poly&) = default;

    /// Coefficients from the highest degree down to x^0.
    std::vector<int> coefficients_high_first() const;
    /// Human-readable form such as "x^4+x+1".
    std::string to_string() const;

private:
    void trim();
    std::vector<std::uint8_t> coeffs_;
};

/// GF(2^m) with log/antilog tables built from a primitive polynomial.
class Gf2mField {
public:
    /// Uses the fixed default primitive polynomial for m (2 <= m <= 10).
    explicit Gf2mField(unsigned m);
    /// primitive_poly is given as a bit mask including the x^m term.
    Gf2mField(unsigned m, std::uint32_t primitive_poly);

    static std::uint32_t default_primitive_poly(unsigned m);

    unsigned m() const noexcept { return m_; }
    std::uint32_t primitive_poly() const noexcept { return poly_; }
    /// Multiplicative group order, 2^m - 1.
    std::uint32_t order() const noexcept { return order_; }

    /// alpha^e for any integer e (reduced modulo the group order).
    std::uint32_t alpha_pow(std::int64_t e) const noexcept;
    /// Discrete log of a nonzero element.
    std::uint32_t log(std::uint32_t x) const;

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept;
    static std::uint32_t add(std::uint32_t a, std::uint32_t b) noexcept { return a ^ b; }

private:
    unsigned m_;
    std::uint32_t poly_;
    std::uint32_t order_;
    std::vector<std::uint32_t> antilog_;
    std::vector<std::uint32_t> log_;
};

/// Exponents e*2^i mod (2^m - 1) of the cyclotomic coset containing exponent.
std::vector<std::uint32_t> cyclotomic_coset(const Gf2mField& field, std::uint32_t exponent);

/// Minimal polynomial over GF(2) of alpha^exponent, 1 <= exponent <= 2^m - 2.
Gf2Poly minimal_polynomial(const Gf2mField& field, std::uint32_t exponent);

}  // namespace ndec
