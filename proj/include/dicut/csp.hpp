#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dicut/rational.hpp"
#include "dicut/rng.hpp"

namespace dicut {

// Predicate Z_q^k -> {0,1}, stored as a truth table of q^k bits indexed in
// lexicographic input order: (a_1,...,a_k) -> sum_j a_j q^(k-j).
class Predicate {
public:
    Predicate(std::uint32_t q, std::uint32_t k, std::vector<std::uint8_t> table);

    std::uint32_t q() const { return q_; }
    std::uint32_t k() const { return k_; }
    std::size_t table_size() const { return table_.size(); }
    const std::vector<std::uint8_t>& table() const { return table_; }

    bool eval(const std::vector<std::uint8_t>& args) const;
    bool eval_index(std::size_t idx) const { return table_[idx] != 0; }

    static Predicate dicut();   // (1-x)y over Z_2
    static Predicate cut();     // x+y over Z_2
    static Predicate const_one(std::uint32_t q, std::uint32_t k);

    // File format: q, k, then q^k bits in lexicographic input order.
    static Predicate read(std::istream& in);
    static Predicate load(const std::string& path);
    void write(std::ostream& out) const;

private:
    std::uint32_t q_;
    std::uint32_t k_;
    std::vector<std::uint8_t> table_;
};

struct Constraint {
    std::uint32_t predicate_id;
    std::vector<std::uint32_t> vars;  // k distinct 0-based variable indices
};

// Max-CSP(F) instance: predicates by id plus an ordered constraint list.
class CspInstance {
public:
    CspInstance(std::uint32_t n, std::vector<Predicate> predicates,
                std::vector<Constraint> constraints);

    std::uint32_t n() const { return n_; }
    std::uint64_t size() const { return constraints_.size(); }
    std::uint32_t q() const;
    std::uint32_t k() const;
    const std::vector<Predicate>& predicates() const { return predicates_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }

    // File format: "q k n m" header, one constraint per line
    // "pred_id j_1 ... j_k" (1-indexed variables); predicates travel
    // separately and are matched by id.
    static CspInstance read(std::istream& in, std::vector<Predicate> predicates);
    void write(std::ostream& out) const;

private:
    std::uint32_t n_;
    std::vector<Predicate> predicates_;
    std::vector<Constraint> constraints_;
};

// Fraction of constraints satisfied by x, as an exact rational.
Rational val_at(const CspInstance& instance, const std::vector<std::uint8_t>& x);

inline constexpr std::uint64_t kDefaultCspEnumerationLimit = std::uint64_t{1} << 24;

// Exact max over all q^n assignments.
Rational brute_force_val(const CspInstance& instance,
                         std::uint64_t limit = kDefaultCspEnumerationLimit);

// Distribution over Z_q^k with exact rational probabilities, supported on a
// predicate's satisfying set. one-wise validation (every coordinate marginal
// exactly uniform) is a separate, stricter constructor; the RMD sampler's
// yes/no gap only needs the support condition, and some predicates (DICUT
// among them) admit no one-wise satisfying distribution at all.
class ConstraintDistribution {
public:
    // probs[idx] is the probability of the assignment with lexicographic
    // index idx; entries must sum to 1 and vanish outside pred^{-1}(1).
    static ConstraintDistribution satisfying(const Predicate& pred, std::vector<Rational> probs);
    // As above plus the exact uniform-marginal check.
    static ConstraintDistribution onewise(const Predicate& pred, std::vector<Rational> probs);
    // Uniform over pred^{-1}(1), validated one-wise.
    static ConstraintDistribution uniform_onewise(const Predicate& pred);

    bool is_onewise() const;
    std::uint32_t q() const { return q_; }
    std::uint32_t k() const { return k_; }
    const std::vector<Rational>& probs() const { return probs_; }

    // Draws an assignment (as its lexicographic index) from the distribution.
    std::size_t sample_index(Rng& rng) const;

private:
    ConstraintDistribution(std::uint32_t q, std::uint32_t k, std::vector<Rational> probs);
    std::uint32_t q_;
    std::uint32_t k_;
    std::vector<Rational> probs_;
    std::vector<double> cumulative_;
};

// One (predicate, mask distribution) pair with a sampling weight.
struct FamilyMember {
    Predicate predicate;
    ConstraintDistribution masks;
    double weight = 1.0;
};

struct RmdSymbol {
    std::uint32_t predicate_id;
    std::vector<std::uint32_t> vars;   // k distinct indices
    std::vector<std::uint8_t> shift;   // z(i) in Z_q^k
};

struct RmdStream {
    std::uint32_t n = 0;
    std::vector<std::uint8_t> x_star;
    std::vector<Predicate> predicates;
    std::vector<RmdSymbol> symbols;

    // Stream file: "q k n m" header then "pred_id j_1 ... j_k z_1 ... z_k"
    // per line (variables 1-indexed).
    void write(std::ostream& out) const;
    static RmdStream read(std::istream& in, std::vector<Predicate> predicates);
};

// Streaming version of the hybrid mask-detection distribution: x* uniform,
// tuples uniform among distinct k-tuples, (f_i, D_i) i.i.d. from the family,
// masks b(i) from D_i for i <= t_hybrid and uniform afterwards, and
// z(i) = x*|tuple - b(i) componentwise mod q. t_hybrid = num_constraints is
// the yes distribution, t_hybrid = 0 the no distribution.
RmdStream sample_rmd_stream(const std::vector<FamilyMember>& family, std::uint32_t n,
                            std::uint64_t num_constraints, std::uint64_t t_hybrid,
                            std::uint64_t seed);

// Keeps, in order, exactly the constraints whose shift is the zero vector.
CspInstance clean(const RmdStream& stream);

// max over D' on a simplex grid (plus local refinement) of
// E_{f ~ weights, a ~ D'^k}[f(a)] for a fixed distribution over the family.
double rho_inner_max(const std::vector<Predicate>& family, const std::vector<double>& weights,
                     std::uint32_t grid);

// min over Delta(F) (grid-searched, |F| <= 3) of the inner max.
double rho_min(const std::vector<Predicate>& family, std::uint32_t grid);

}  // namespace dicut
