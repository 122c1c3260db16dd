#include "ndec/linear_code.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "ndec/errors.hpp"

namespace ndec {

LinearCode::LinearCode(BitMatrix generator, BitMatrix parity_check, std::optional<std::size_t> d_min,
                       std::string name)
    : n_(generator.cols()),
      k_(generator.rows()),
      d_min_(0),
      g_(std::move(generator)),
      h_(std::move(parity_check)),
      name_(std::move(name)) {
    if (k_ == 0 || n_ == 0 || k_ >= n_) throw ConstructionError("code requires 0 < k < n");
    if (h_.cols() != n_ || h_.rows() != n_ - k_) throw DimensionError("parity-check matrix must be (n-k) x n");
    for (std::size_t r = 0; r < k_; ++r)
        if (!h_.multiply_transposed(g_.row(r)).is_zero())
            throw InvariantViolation("G·H^T != 0 for generator row " + std::to_string(r));
    if (g_.rank() != k_) throw InvariantViolation("generator matrix is rank deficient");
    if (h_.rank() != n_ - k_) throw InvariantViolation("parity-check matrix is rank deficient");

    if (d_min) {
        d_min_ = *d_min;
    } else if (k_ <= kMaxEnumerationDimension) {
        d_min_ = min_distance_bruteforce(g_);
    } else {
        throw ConstructionError("d_min must be supplied for k > 20");
    }
    if (d_min_ < 1) throw ConstructionError("d_min must be at least 1");
}

BitVector LinearCode::encode(const BitVector& message) const {
    if (message.size() != k_)
        throw DimensionError("message length " + std::to_string(message.size()) + " != k = " + std::to_string(k_));
    return g_.left_multiply(message);
}

BitVector LinearCode::syndrome(const BitVector& word) const {
    if (word.size() != n_)
        throw DimensionError("word length " + std::to_string(word.size()) + " != n = " + std::to_string(n_));
    return h_.multiply_transposed(word);
}

Gf2Poly bch_generator_poly(const Gf2mField& field, unsigned t_design) {
    if (t_design < 1) throw RangeError("design correction capability must be >= 1");
    if (2 * std::uint64_t{t_design} > field.order() - 1)
        throw ConstructionError("design distance exceeds the code length");

    // lcm of minimal polynomials = product over distinct cyclotomic cosets.
    std::vector<bool> covered(field.order(), false);
    Gf2Poly g = Gf2Poly::monomial(0);
    for (std::uint32_t e = 1; e <= 2 * t_design; ++e) {
        if (covered[e]) continue;
        for (auto c : cyclotomic_coset(field, e)) covered[c] = true;
        g = g * minimal_polynomial(field, e);
    }
    return g;
}

Gf2Poly word_to_poly(const BitVector& word) {
    std::vector<unsigned> exps;
    const auto n = word.size();
    for (std::size_t i = 0; i < n; ++i)
        if (word.get(i)) exps.push_back(static_cast<unsigned>(n - 1 - i));
    return Gf2Poly::from_exponents(exps);
}

BitMatrix systematic_generator_from_poly(const Gf2Poly& g, std::size_t n) {
    const auto r = static_cast<std::size_t>(g.degree());
    if (g.is_zero() || r >= n) throw ConstructionError("degenerate code: generator degree >= n");
    const std::size_t k = n - r;

    // Row i holds x^(k-1-i) g(x): its leading 1 sits at position i.
    BitMatrix gm(k, n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t d = 0; d <= r; ++d)
            if (g.coeff(static_cast<unsigned>(d))) gm.set(i, i + (r - d), true);

    // Upper-triangular with unit diagonal; clearing above each pivot gives [I | P].
    for (std::size_t c = k; c-- > 0;)
        for (std::size_t i = 0; i < c; ++i)
            if (gm.get(i, c)) gm.row(i) ^= gm.row(c);
    return gm;
}

LinearCode bch_construct(unsigned m, unsigned t_design) {
    if (m < 2 || m > 10) throw RangeError("BCH extension degree m must be in [2, 10], got " + std::to_string(m));
    if (t_design < 1) throw RangeError("BCH design t must be >= 1");
    const Gf2mField field(m);
    const std::size_t n = field.order();
    if (2 * std::size_t{t_design} + 1 > n) throw ConstructionError("degenerate BCH code: design distance exceeds n");

    auto g = bch_generator_poly(field, t_design);
    const auto r = static_cast<std::size_t>(g.degree());
    if (r >= n) throw ConstructionError("degenerate BCH code: k <= 0");
    const std::size_t k = n - r;

    if (!g.divides(Gf2Poly::monomial(static_cast<unsigned>(n)) + Gf2Poly::monomial(0)))
        throw InvariantViolation("generator polynomial does not divide x^n + 1");

    auto gm = systematic_generator_from_poly(g, n);
    BitMatrix hm(r, n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (gm.get(i, k + j)) hm.set(j, i, true);
    for (std::size_t j = 0; j < r; ++j) hm.set(j, k + j, true);

    std::optional<std::size_t> d_min;
    if (k > kMaxEnumerationDimension) d_min = 2 * std::size_t{t_design} + 1;
    LinearCode code(std::move(gm), std::move(hm), d_min,
                    "BCH(" + std::to_string(n) + "," + std::to_string(k) + ")");
    code.gen_poly_ = std::move(g);
    code.design_t_ = t_design;
    return code;
}

std::size_t min_distance_bruteforce(const BitMatrix& generator) {
    const auto k = generator.rows();
    if (k > kMaxEnumerationDimension)
        throw CapacityError("exhaustive enumeration refused for k = " + std::to_string(k) + " > 20");
    if (k == 0) throw RangeError("code has no codewords besides zero");

    BitVector word(generator.cols());
    std::size_t best = generator.cols() + 1;
    const std::uint64_t count = std::uint64_t{1} << k;
    for (std::uint64_t i = 1; i < count; ++i) {
        // Gray code: consecutive messages differ in row countr_zero(i).
        word ^= generator.row(static_cast<std::size_t>(std::countr_zero(i)));
        best = std::min(best, word.weight());
    }
    return best;
}

std::string describe(const LinearCode& code) {
    std::ostringstream os;
    if (!code.name().empty()) os << "code: " << code.name() << '\n';
    os << "n = " << code.n() << '\n' << "k = " << code.k() << '\n';
    if (code.design_t()) os << "d_min (design) = " << 2 * *code.design_t() + 1 << '\n';
    os << "d_min = " << code.d_min();
    if (code.k() > kMaxEnumerationDimension) os << " (design bound, k too large to enumerate)";
    os << '\n' << "t = " << code.t() << '\n';
    if (code.generator_poly()) {
        os << "g(x) = " << code.generator_poly()->to_string() << '\n' << "g coefficients (high first) =";
        for (int c : code.generator_poly()->coefficients_high_first()) os << ' ' << c;
        os << '\n';
    }
    const auto& h = code.parity_check();
    os << "H: " << h.rows() << " x " << h.cols() << '\n';
    for (std::size_t r = 0; r < h.rows(); ++r) os << h.row(r).to_string() << '\n';
    return os.str();
}

}  // namespace ndec
