#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dicut/rng.hpp"

namespace dicut {

// GF(2^r) in polynomial basis, 1 <= r <= 64. Elements are bit patterns of
// degree-(r-1) polynomials over GF(2); reduction is by a fixed low-weight
// irreducible polynomial per degree (kGf2IrreduciblesLow below), so values
// are bit-exact reproducible across implementations.
class Gf2Field {
public:
    explicit Gf2Field(unsigned degree);

    unsigned degree() const { return r_; }
    std::uint64_t mask() const { return mask_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a ^ b; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t inverse(std::uint64_t a) const;  // a != 0
    std::uint64_t sample(Rng& rng) const { return rng() & mask_; }

private:
    unsigned r_;
    std::uint64_t mask_;     // low r bits
    std::uint64_t top_bit_;  // bit r-1
    std::uint64_t reduction_;
};

// Low bits of the irreducible polynomial for each degree r in 1..64 (full
// polynomial is x^r + entry). Taken from the standard table of low-weight
// binary irreducible polynomials; a unit test re-verifies irreducibility.
extern const std::array<std::uint64_t, 64> kGf2IrreduciblesLow;

// Hash from a k-wise independent family [0,n) -> [0,m_range), m_range = 2^l.
// h = g o h' o f with f the identity bit-pattern injection into GF(2^r),
// h'(x) = sum_i a_i x^(i-1) a random degree-(k-1) polynomial, and g
// truncation to the low l bits (so |g^{-1}(a)| = 2^(r-l) for every a).
class KwiseHash {
public:
    static KwiseHash sample(std::uint64_t n, std::uint64_t m_range, unsigned k,
                            std::uint64_t seed);

    std::uint64_t operator()(std::uint64_t x) const;

    std::uint64_t domain() const { return n_; }
    std::uint64_t range() const { return m_range_; }
    unsigned independence() const { return static_cast<unsigned>(coeffs_.size()); }
    unsigned field_degree() const { return field_.degree(); }
    const std::vector<std::uint64_t>& coefficients() const { return coeffs_; }

private:
    KwiseHash(Gf2Field field, std::uint64_t n, std::uint64_t m_range,
              std::vector<std::uint64_t> coeffs);
    Gf2Field field_;
    std::uint64_t n_;
    std::uint64_t m_range_;
    std::uint64_t out_mask_;
    std::vector<std::uint64_t> coeffs_;  // a_1 ... a_k
};

}  // namespace dicut
