#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dicut/rng.hpp"

namespace dicut {

// k-uniform hypergraph on vertices {0,...,n-1}: an ordered sequence of
// hyperedges, each a tuple of k distinct vertices. Whole tuples may repeat.
// Order within a tuple is kept (matching the sampling distribution) but the
// incidence-graph analyses below depend only on membership.
class Hypergraph {
public:
    Hypergraph(std::uint32_t n, std::uint32_t k,
               std::vector<std::vector<std::uint32_t>> hyperedges);

    std::uint32_t n() const { return n_; }
    std::uint32_t k() const { return k_; }
    std::uint64_t m() const { return edges_.size(); }
    const std::vector<std::vector<std::uint32_t>>& hyperedges() const { return edges_; }

    // File format: "n k m" header then m lines of k vertex indices (1-based).
    static Hypergraph read(std::istream& in);
    static Hypergraph load(const std::string& path);
    void write(std::ostream& out) const;

private:
    std::uint32_t n_;
    std::uint32_t k_;
    std::vector<std::vector<std::uint32_t>> edges_;
};

// G_{k,alpha}(n) with edge_count = alpha n: every hyperedge an independent
// uniform tuple of k distinct vertices.
Hypergraph sample_hypergraph(std::uint32_t n, std::uint32_t k, std::uint64_t edge_count,
                             std::uint64_t seed);

// True iff the bipartite vertex-hyperedge incidence graph B_G is acyclic.
// Two hyperedges sharing >= 2 vertices already close a 4-cycle.
bool is_cycle_free(const Hypergraph& g);

// Canonical partition of a vertex subset U by the connected components of
// B_G: parts are the nonempty intersections of left components with U,
// ordered so part i leads with the least not-yet-covered element of U.
struct CcPartition {
    std::vector<std::vector<std::uint32_t>> parts;
    std::vector<std::uint64_t> l_type;  // part sizes
    std::vector<std::uint64_t> r_type;  // right-vertex count of the containing component
    std::uint64_t r_total = 0;
    bool valid = false;  // all part sizes >= 2
};

CcPartition cc_part(const Hypergraph& g, const std::vector<std::uint32_t>& u);

inline constexpr std::uint64_t kDefaultSvectorLimit = std::uint64_t{1} << 24;

// Brute-force count of edge labelings s in (Z_q^k)^m with no block of
// Hamming weight exactly 1 satisfying M^T s = v over Z_q, times the
// cycle-free indicator (0 whenever B_G has a cycle).
std::uint64_t count_s_vectors(const Hypergraph& g, std::uint32_t q,
                              const std::vector<std::uint8_t>& v,
                              std::uint64_t limit = kDefaultSvectorLimit);

// Monte Carlo estimate of the h-quantity for supports of size ell: the max
// over representative label patterns (one per multiset of nonzero values on
// a fixed support; the hypergraph distribution is vertex-symmetric) of the
// mean of count_s_vectors over sampled hypergraphs.
double estimate_h(std::uint32_t n, std::uint32_t k, std::uint32_t q, std::uint64_t edge_count,
                  std::uint32_t ell, std::uint64_t samples, std::uint64_t seed,
                  std::uint64_t limit = kDefaultSvectorLimit);

struct CycleProbability {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t cyclic = 0;
};

// Empirical Pr[not cycle-free] over sampled hypergraphs, with the binomial
// standard error of the estimate.
CycleProbability cycle_probability(std::uint32_t n, std::uint32_t k, std::uint64_t edge_count,
                                   std::uint64_t trials, std::uint64_t seed);

}  // namespace dicut
