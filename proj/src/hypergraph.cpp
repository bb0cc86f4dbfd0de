#include "dicut/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace dicut {

namespace {

// Union-find over the n left + m right vertices of the incidence graph.
class UnionFind {
public:
    explicit UnionFind(std::size_t size) : parent_(size), rank_(size, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    // Returns false when x and y were already connected (a cycle closes).
    bool unite(std::size_t x, std::size_t y) {
        std::size_t a = find(x), b = find(y);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) rank_[a]++;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (result > limit / base) return limit + 1;  // saturate
        result *= base;
    }
    return result;
}

}  // namespace

Hypergraph::Hypergraph(std::uint32_t n, std::uint32_t k,
                       std::vector<std::vector<std::uint32_t>> hyperedges)
    : n_(n), k_(k), edges_(std::move(hyperedges)) {
    if (n_ == 0) throw std::invalid_argument("hypergraph: vertex count must be positive");
    if (k_ < 2 || k_ > n_) throw std::invalid_argument("hypergraph: need 2 <= k <= n");
    for (const auto& e : edges_) {
        if (e.size() != k_) throw std::invalid_argument("hypergraph: tuple arity mismatch");
        for (std::size_t a = 0; a < e.size(); ++a) {
            if (e[a] >= n_) throw std::invalid_argument("hypergraph: vertex out of range");
            for (std::size_t b = a + 1; b < e.size(); ++b)
                if (e[a] == e[b])
                    throw std::invalid_argument("hypergraph: tuple entries must be distinct");
        }
    }
}

Hypergraph Hypergraph::read(std::istream& in) {
    std::uint32_t n = 0, k = 0;
    std::uint64_t m = 0;
    if (!(in >> n >> k >> m)) throw std::invalid_argument("hypergraph file: bad header");
    std::vector<std::vector<std::uint32_t>> edges(m, std::vector<std::uint32_t>(k));
    for (auto& e : edges)
        for (auto& v : e) {
            std::uint64_t raw = 0;
            if (!(in >> raw) || raw < 1 || raw > n)
                throw std::invalid_argument("hypergraph file: bad vertex index");
            v = static_cast<std::uint32_t>(raw - 1);
        }
    return Hypergraph(n, k, std::move(edges));
}

Hypergraph Hypergraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hypergraph file: " + path);
    return read(in);
}

void Hypergraph::write(std::ostream& out) const {
    out << n_ << ' ' << k_ << ' ' << m() << '\n';
    for (const auto& e : edges_) {
        for (std::size_t j = 0; j < e.size(); ++j) out << (j ? " " : "") << e[j] + 1;
        out << '\n';
    }
}

Hypergraph sample_hypergraph(std::uint32_t n, std::uint32_t k, std::uint64_t edge_count,
                             std::uint64_t seed) {
    if (k < 2 || k > n) throw std::invalid_argument("sample_hypergraph: need 2 <= k <= n");
    Rng rng = make_rng(seed);
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> swaps;
    std::vector<std::vector<std::uint32_t>> edges;
    edges.reserve(edge_count);
    for (std::uint64_t i = 0; i < edge_count; ++i) {
        swaps.clear();
        for (std::uint32_t j = 0; j < k; ++j) {
            const auto r = static_cast<std::uint32_t>(j + uniform_below(rng, n - j));
            swaps.emplace_back(j, r);
            std::swap(pool[j], pool[r]);
        }
        edges.emplace_back(pool.begin(), pool.begin() + k);
        for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
            std::swap(pool[it->first], pool[it->second]);
    }
    return Hypergraph(n, k, std::move(edges));
}

bool is_cycle_free(const Hypergraph& g) {
    UnionFind uf(static_cast<std::size_t>(g.n()) + g.m());
    for (std::uint64_t j = 0; j < g.m(); ++j) {
        const std::size_t right = g.n() + j;
        for (std::uint32_t v : g.hyperedges()[j])
            if (!uf.unite(v, right)) return false;
    }
    return true;
}

CcPartition cc_part(const Hypergraph& g, const std::vector<std::uint32_t>& u) {
    for (std::uint32_t v : u)
        if (v >= g.n()) throw std::invalid_argument("cc_part: vertex out of range");

    UnionFind uf(static_cast<std::size_t>(g.n()) + g.m());
    for (std::uint64_t j = 0; j < g.m(); ++j)
        for (std::uint32_t v : g.hyperedges()[j]) uf.unite(v, g.n() + j);

    std::unordered_map<std::size_t, std::uint64_t> right_count;
    for (std::uint64_t j = 0; j < g.m(); ++j) right_count[uf.find(g.n() + j)]++;

    std::vector<std::uint32_t> members = u;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    CcPartition part;
    std::unordered_map<std::size_t, std::size_t> part_of_root;
    // ascending scan gives the canonical order: each part leads with the
    // least element of U not already covered
    for (std::uint32_t v : members) {
        const std::size_t root = uf.find(v);
        const auto it = part_of_root.find(root);
        if (it == part_of_root.end()) {
            part_of_root.emplace(root, part.parts.size());
            part.parts.push_back({v});
            const auto rc = right_count.find(root);
            part.r_type.push_back(rc == right_count.end() ? 0 : rc->second);
        } else {
            part.parts[it->second].push_back(v);
        }
    }
    part.l_type.reserve(part.parts.size());
    part.valid = !part.parts.empty();
    for (const auto& p : part.parts) {
        part.l_type.push_back(p.size());
        if (p.size() < 2) part.valid = false;
    }
    for (std::uint64_t r : part.r_type) part.r_total += r;
    return part;
}

std::uint64_t count_s_vectors(const Hypergraph& g, std::uint32_t q,
                              const std::vector<std::uint8_t>& v, std::uint64_t limit) {
    if (q < 2) throw std::invalid_argument("count_s_vectors: q must be >= 2");
    if (v.size() != g.n()) throw std::invalid_argument("count_s_vectors: v must have length n");
    for (std::uint8_t x : v)
        if (x >= q) throw std::invalid_argument("count_s_vectors: entry outside Z_q");
    const std::uint64_t states = checked_pow(q, g.k() * g.m(), limit);
    if (states > limit)
        throw std::invalid_argument("count_s_vectors: q^(k m) exceeds enumeration limit");

    if (!is_cycle_free(g)) return 0;

    const std::uint64_t total_coords = g.k() * g.m();
    std::vector<std::uint8_t> s(total_coords, 0);
    std::vector<std::uint32_t> accum(g.n(), 0);  // M^T s mod q, updated incrementally
    std::vector<std::uint32_t> block_weight(g.m(), 0);
    std::uint64_t nonzero_v = 0;
    for (std::uint32_t i = 0; i < g.n(); ++i)
        if (v[i] != 0) nonzero_v++;
    // mismatches = number of vertices where accum != v
    std::uint64_t mismatches = nonzero_v;
    std::uint64_t bad_blocks = 0;  // blocks with Hamming weight exactly 1
    std::uint64_t count = 0;

    // flat coordinate c belongs to block c / k and vertex owner[c]
    std::vector<std::uint32_t> owner(total_coords);
    for (std::uint64_t j = 0; j < g.m(); ++j)
        for (std::uint32_t a = 0; a < g.k(); ++a) owner[j * g.k() + a] = g.hyperedges()[j][a];

    for (;;) {
        if (mismatches == 0 && bad_blocks == 0) count++;
        // odometer step with incremental bookkeeping
        std::uint64_t c = 0;
        for (; c < total_coords; ++c) {
            const std::uint32_t vert = owner[c];
            const std::uint64_t block = c / g.k();
            // remove old digit's contribution
            if (accum[vert] == v[vert]) mismatches++;
            accum[vert] = (accum[vert] + q - s[c] % q) % q;
            if (s[c] != 0 && --block_weight[block] == 0) {
                // weight dropped 1 -> 0
                bad_blocks--;
            } else if (s[c] != 0 && block_weight[block] == 1) {
                bad_blocks++;
            }
            s[c] = static_cast<std::uint8_t>((s[c] + 1) % q);
            if (s[c] != 0 && ++block_weight[block] == 1) {
                bad_blocks++;
            } else if (s[c] != 0 && block_weight[block] == 2) {
                bad_blocks--;
            }
            accum[vert] = (accum[vert] + s[c]) % q;
            if (accum[vert] == v[vert]) mismatches--;
            if (s[c] != 0) break;  // no carry
        }
        if (c == total_coords) break;  // wrapped all the way around
    }
    return count;
}

double estimate_h(std::uint32_t n, std::uint32_t k, std::uint32_t q, std::uint64_t edge_count,
                  std::uint32_t ell, std::uint64_t samples, std::uint64_t seed,
                  std::uint64_t limit) {
    if (ell < 1 || ell > n) throw std::invalid_argument("estimate_h: need 1 <= ell <= n");
    if (samples == 0) throw std::invalid_argument("estimate_h: need at least one sample");
    if (checked_pow(q, static_cast<std::uint64_t>(k) * edge_count, limit) > limit)
        throw std::invalid_argument("estimate_h: enumeration infeasible at this size");

    // One representative v per multiset of nonzero values on support
    // {0,...,ell-1}: non-decreasing value sequences over {1,...,q-1}.
    std::vector<std::vector<std::uint8_t>> patterns;
    std::vector<std::uint8_t> current(ell, 1);
    for (;;) {
        patterns.push_back(current);
        std::uint32_t pos = ell;
        while (pos > 0 && current[pos - 1] == q - 1) pos--;
        if (pos == 0) break;
        current[pos - 1]++;
        for (std::uint32_t i = pos; i < ell; ++i) current[i] = current[pos - 1];
    }

    std::vector<double> totals(patterns.size(), 0.0);
    for (std::uint64_t trial = 0; trial < samples; ++trial) {
        const Hypergraph g =
            sample_hypergraph(n, k, edge_count, derive_seed(seed, 0x68u, trial));
        for (std::size_t p = 0; p < patterns.size(); ++p) {
            std::vector<std::uint8_t> v(n, 0);
            for (std::uint32_t i = 0; i < ell; ++i) v[i] = patterns[p][i];
            totals[p] += static_cast<double>(count_s_vectors(g, q, v, limit));
        }
    }
    double best = 0.0;
    for (double t : totals) best = std::max(best, t / static_cast<double>(samples));
    return best;
}

CycleProbability cycle_probability(std::uint32_t n, std::uint32_t k, std::uint64_t edge_count,
                                   std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("cycle_probability: need at least one trial");
    CycleProbability result;
    result.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Hypergraph g = sample_hypergraph(n, k, edge_count, derive_seed(seed, 0x63u, t));
        if (!is_cycle_free(g)) result.cyclic++;
    }
    const double p = static_cast<double>(result.cyclic) / static_cast<double>(trials);
    result.estimate = p;
    result.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return result;
}

}  // namespace dicut
