#include "ndec/gf2m.hpp"

#include <algorithm>

#include "ndec/errors.hpp"

namespace ndec {

Gf2Poly Gf2Poly::from_exponents(std::initializer_list<unsigned> exponents) {
    return from_exponents(std::vector<unsigned>(exponents));
}

Gf2Poly Gf2Poly::from_exponents(const std::vector<unsigned>& exponents) {
    Gf2Poly p;
    for (auto e : exponents) {
        if (e >= p.coeffs_.size()) p.coeffs_.resize(e + 1, 0);
        p.coeffs_[e] ^= 1;
    }
    p.trim();
    return p;
}

Gf2Poly Gf2Poly::from_mask(std::uint64_t mask) {
    Gf2Poly p;
    for (unsigned i = 0; i < 64; ++i)
        if ((mask >> i) & 1u) {
            p.coeffs_.resize(i + 1, 0);
            p.coeffs_[i] = 1;
        }
    return p;
}

Gf2Poly Gf2Poly::monomial(unsigned degree) {
    Gf2Poly p;
    p.coeffs_.assign(degree + 1, 0);
    p.coeffs_[degree] = 1;
    return p;
}

void Gf2Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Gf2Poly Gf2Poly::operator*(const Gf2Poly& other) const {
    if (is_zero() || other.is_zero()) return {};
    Gf2Poly out;
    out.coeffs_.assign(coeffs_.size() + other.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (!coeffs_[i]) continue;
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out.coeffs_[i + j] ^= other.coeffs_[j];
    }
    out.trim();
    return out;
}

Gf2Poly Gf2Poly::operator+(const Gf2Poly& other) const {
    Gf2Poly out = *this;
    if (out.coeffs_.size() < other.coeffs_.size()) out.coeffs_.resize(other.coeffs_.size(), 0);
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i) out.coeffs_[i] ^= other.coeffs_[i];
    out.trim();
    return out;
}

Gf2Poly Gf2Poly::operator%(const Gf2Poly& divisor) const {
    if (divisor.is_zero()) throw RangeError("polynomial division by zero");
    Gf2Poly rem = *this;
    const auto dd = static_cast<std::size_t>(divisor.degree());
    for (std::size_t top = rem.coeffs_.size(); top-- > dd;) {
        if (!rem.coeffs_[top]) continue;
        const std::size_t shift = top - dd;
        for (std::size_t j = 0; j <= dd; ++j) rem.coeffs_[shift + j] ^= divisor.coeffs_[j];
    }
    rem.trim();
    return rem;
}

std::vector<int> Gf2Poly::coefficients_high_first() const {
    std::vector<int> out(coeffs_.rbegin(), coeffs_.rend());
    if (out.empty()) out.push_back(0);
    return out;
}

std::string Gf2Poly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        if (!coeffs_[static_cast<std::size_t>(i)]) continue;
        if (!s.empty()) s += '+';
        if (i == 0)
            s += '1';
        else if (i == 1)
            s += 'x';
        else
            s += "x^" + std::to_string(i);
    }
    return s;
}

std::uint32_t Gf2mField::default_primitive_poly(unsigned m) {
    switch (m) {
        case 2: return 0x7;     // x^2+x+1
        case 3: return 0xB;     // x^3+x+1
        case 4: return 0x13;    // x^4+x+1
        case 5: return 0x25;    // x^5+x^2+1
        case 6: return 0x43;    // x^6+x+1
        case 7: return 0x89;    // x^7+x^3+1
        case 8: return 0x11D;   // x^8+x^4+x^3+x^2+1
        case 9: return 0x211;   // x^9+x^4+1
        case 10: return 0x409;  // x^10+x^3+1
        default: throw RangeError("extension degree m must be in [2, 10], got " + std::to_string(m));
    }
}

Gf2mField::Gf2mField(unsigned m) : Gf2mField(m, default_primitive_poly(m)) {}

Gf2mField::Gf2mField(unsigned m, std::uint32_t primitive_poly)
    : m_(m), poly_(primitive_poly), order_((1u << m) - 1) {
    if (m < 2 || m > 16) throw RangeError("extension degree m out of range");
    if ((primitive_poly >> m) != 1u) throw ConstructionError("primitive polynomial must have degree m");

    antilog_.resize(order_);
    log_.assign(std::size_t{order_} + 1, 0);
    std::vector<bool> seen(std::size_t{order_} + 1, false);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order_; ++i) {
        if (x == 0 || seen[x]) throw ConstructionError("polynomial is not primitive: alpha does not generate the field");
        seen[x] = true;
        antilog_[i] = x;
        log_[x] = i;
        x <<= 1;
        if (x & (1u << m)) x ^= primitive_poly;
    }
    if (x != 1) throw ConstructionError("polynomial is not primitive: alpha^(2^m-1) != 1");
}

std::uint32_t Gf2mField::alpha_pow(std::int64_t e) const noexcept {
    auto r = e % static_cast<std::int64_t>(order_);
    if (r < 0) r += order_;
    return antilog_[static_cast<std::size_t>(r)];
}

std::uint32_t Gf2mField::log(std::uint32_t x) const {
    if (x == 0 || x > order_) throw RangeError("log of zero or out-of-field element");
    return log_[x];
}

std::uint32_t Gf2mField::mul(std::uint32_t a, std::uint32_t b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return antilog_[(log_[a] + log_[b]) % order_];
}

std::vector<std::uint32_t> cyclotomic_coset(const Gf2mField& field, std::uint32_t exponent) {
    std::vector<std::uint32_t> coset;
    std::uint32_t e = exponent % field.order();
    do {
        coset.push_back(e);
        e = static_cast<std::uint32_t>((std::uint64_t{e} * 2) % field.order());
    } while (e != coset.front());
    return coset;
}

Gf2Poly minimal_polynomial(const Gf2mField& field, std::uint32_t exponent) {
    if (exponent < 1 || exponent > field.order() - 1)
        throw RangeError("minimal polynomial exponent must lie in [1, 2^m - 2]");

    // Product of (x + alpha^c) over the coset, with coefficients in GF(2^m).
    std::vector<std::uint32_t> prod{1};
    for (auto c : cyclotomic_coset(field, exponent)) {
        const auto root = field.alpha_pow(c);
        std::vector<std::uint32_t> next(prod.size() + 1, 0);
        for (std::size_t i = 0; i < prod.size(); ++i) {
            next[i + 1] ^= prod[i];
            next[i] ^= field.mul(prod[i], root);
        }
        prod = std::move(next);
    }

    std::vector<unsigned> exps;
    for (std::size_t i = 0; i < prod.size(); ++i) {
        if (prod[i] > 1) throw InvariantViolation("minimal polynomial has a non-binary coefficient");
        if (prod[i] == 1) exps.push_back(static_cast<unsigned>(i));
    }
    return Gf2Poly::from_exponents(exps);
}

}  // namespace ndec
