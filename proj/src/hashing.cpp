#include "dicut/hashing.hpp"

#include <bit>
#include <stdexcept>

namespace dicut {

const std::array<std::uint64_t, 64> kGf2IrreduciblesLow = {
    0x1ull,        0x3ull,  0x3ull,  0x3ull,  0x5ull,  0x3ull,  0x3ull,  0x1bull,
    0x3ull,        0x9ull,  0x5ull,  0x9ull,  0x1bull, 0x21ull, 0x3ull,  0x2bull,
    0x9ull,        0x9ull,  0x27ull, 0x9ull,  0x5ull,  0x3ull,  0x21ull, 0x1bull,
    0x9ull,        0x1bull, 0x27ull, 0x3ull,  0x5ull,  0x3ull,  0x9ull,  0x8dull,
    0x401ull,      0x81ull, 0x5ull,  0x201ull, 0x53ull, 0x63ull, 0x11ull, 0x39ull,
    0x9ull,        0x81ull, 0x59ull, 0x21ull, 0x1bull, 0x3ull,  0x21ull, 0x2dull,
    0x201ull,      0x1dull, 0x4bull, 0x9ull,  0x47ull, 0x201ull, 0x81ull, 0x95ull,
    0x11ull,       0x80001ull, 0x95ull, 0x3ull, 0x27ull, 0x20000001ull, 0x3ull, 0x1bull,
};

Gf2Field::Gf2Field(unsigned degree) : r_(degree) {
    if (r_ < 1 || r_ > 64) throw std::invalid_argument("Gf2Field: degree must be in [1, 64]");
    mask_ = r_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r_) - 1;
    top_bit_ = std::uint64_t{1} << (r_ - 1);
    reduction_ = kGf2IrreduciblesLow[r_ - 1];
}

std::uint64_t Gf2Field::mul(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t res = 0;
    while (b) {
        if (b & 1) res ^= a;
        b >>= 1;
        const bool carry = (a & top_bit_) != 0;
        a = (a << 1) & mask_;
        if (carry) a ^= reduction_;
    }
    return res;
}

std::uint64_t Gf2Field::inverse(std::uint64_t a) const {
    if (a == 0) throw std::domain_error("Gf2Field: zero has no inverse");
    // a^(2^r - 2) = prod_{i=1}^{r-1} a^(2^i)
    std::uint64_t square = a, res = 1;
    for (unsigned i = 1; i < r_; ++i) {
        square = mul(square, square);
        res = mul(res, square);
    }
    return res;
}

KwiseHash::KwiseHash(Gf2Field field, std::uint64_t n, std::uint64_t m_range,
                     std::vector<std::uint64_t> coeffs)
    : field_(field), n_(n), m_range_(m_range), out_mask_(m_range - 1), coeffs_(std::move(coeffs)) {}

KwiseHash KwiseHash::sample(std::uint64_t n, std::uint64_t m_range, unsigned k,
                            std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("KwiseHash: domain must be non-empty");
    if (m_range == 0 || !std::has_single_bit(m_range))
        throw std::invalid_argument("KwiseHash: range size must be a power of two");
    if (k < 1 || k > 8) throw std::invalid_argument("KwiseHash: independence must be in [1, 8]");
    const std::uint64_t need = std::max(n, m_range);
    unsigned r = 1;
    while (r < 64 && (std::uint64_t{1} << r) < need) ++r;
    Gf2Field field(r);
    Rng rng = make_rng(seed);
    std::vector<std::uint64_t> coeffs(k);
    for (auto& c : coeffs) c = field.sample(rng);
    return KwiseHash(field, n, m_range, std::move(coeffs));
}

std::uint64_t KwiseHash::operator()(std::uint64_t x) const {
    if (x >= n_) throw std::domain_error("KwiseHash: input outside domain");
    // Horner on h'(x) = a_1 + a_2 x + ... + a_k x^(k-1)
    std::uint64_t acc = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;)
        acc = field_.add(field_.mul(acc, x), coeffs_[i]);
    return acc & out_mask_;
}

}  // namespace dicut
