#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dicut/rational.hpp"

namespace dicut {

using Vertex = std::uint32_t;

struct Edge {
    Vertex from;
    Vertex to;
};

inline bool operator==(const Edge& a, const Edge& b) { return a.from == b.from && a.to == b.to; }

// Unweighted directed multigraph on vertices {0, ..., n-1}. Parallel edges
// are allowed, self-loops are not.
class DirectedMultigraph {
public:
    DirectedMultigraph(std::uint32_t n, std::vector<Edge> edges);

    std::uint32_t n() const { return n_; }
    std::uint64_t m() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::uint32_t max_total_degree() const;

    // File format: "n m" header, then m lines "u v" (1-indexed).
    static DirectedMultigraph read(std::istream& in);
    static DirectedMultigraph load(const std::string& path);
    void write(std::ostream& out) const;
    void save(const std::string& path) const;

private:
    std::uint32_t n_;
    std::vector<Edge> edges_;
};

DirectedMultigraph random_graph(std::uint32_t n, std::uint64_t m, std::uint64_t seed);
// Rejection-sampled random graph with every total degree (in+out) <= max_degree.
DirectedMultigraph random_bounded_degree_graph(std::uint32_t n, std::uint64_t m,
                                               std::uint32_t max_degree, std::uint64_t seed);

// Bias thresholds -1 = t_1 < ... < t_l = 1 carving [-1,1] into l classes:
// class r (0-based) is [t_r, t_{r+1}) for r < l-1, and class l-1 is {1}.
class BiasThresholds {
public:
    explicit BiasThresholds(std::vector<Rational> thresholds);

    std::size_t classes() const { return t_.size(); }
    const std::vector<Rational>& values() const { return t_; }

    // 0-based class index of a bias; requires -1 <= b <= 1.
    std::size_t class_of(const Rational& bias) const;

    static BiasThresholds ternary();  // (-1, 0, 1)

private:
    std::vector<Rational> t_;
};

// Threshold vector plus per-class probabilities of assigning a vertex to the
// L side of the cut.
class ObliviousScheme {
public:
    ObliviousScheme(BiasThresholds thresholds, std::vector<double> probs);

    const BiasThresholds& thresholds() const { return t_; }
    const std::vector<double>& probs() const { return p_; }
    std::size_t classes() const { return p_.size(); }

    // The scheme shipped with this library: an anti-symmetric step scheme
    // (p_i = 1 - p_{l+1-i}, monotone in bias, fully biased at the ends).
    // Its approximation floor is established empirically by the sandwich
    // verification suite, not analytically.
    static ObliviousScheme default_scheme();

    // File format: line 1 "l", line 2 l thresholds as exact rationals "a/b",
    // line 3 l probabilities as decimals.
    static ObliviousScheme read(std::istream& in);
    static ObliviousScheme load(const std::string& path);
    void write(std::ostream& out) const;

private:
    BiasThresholds t_;
    std::vector<double> p_;
};

// l x l matrix of edge counts between bias classes, plus the edge count of
// the reference graph the biases were measured on.
class DensityMatrix {
public:
    DensityMatrix(std::size_t classes, std::uint64_t m_total);

    std::size_t classes() const { return classes_; }
    std::uint64_t m_total() const { return m_total_; }
    std::uint64_t& at(std::size_t i, std::size_t j) { return counts_[i * classes_ + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return counts_[i * classes_ + j]; }
    std::uint64_t sum() const;

    std::vector<double> as_real() const;

private:
    std::size_t classes_;
    std::uint64_t m_total_;
    std::vector<std::uint64_t> counts_;
};

// Real-valued l x l matrix: either an exact density matrix or a scaled
// estimate of one coming out of a sampling algorithm.
struct DensityEstimate {
    std::size_t classes = 0;
    std::uint64_t m = 0;
    bool exact = false;
    std::vector<double> values;  // row-major, classes x classes

    double at(std::size_t i, std::size_t j) const { return values[i * classes + j]; }
    static DensityEstimate from_exact(const DensityMatrix& dm);
    // max_{i,j} |values(i,j) - reference(i,j)|
    double max_entry_error(const DensityMatrix& reference) const;
};

// Out/in degree counters for a designated set of tracked vertices.
class BiasProfile {
public:
    void track(Vertex v);
    bool tracked(Vertex v) const { return degrees_.contains(v); }
    std::size_t tracked_count() const { return degrees_.size(); }

    void add_out(Vertex v) { degrees_.at(v).out++; }
    void add_in(Vertex v) { degrees_.at(v).in++; }
    // Credits whichever endpoints are currently tracked.
    void observe(const Edge& e);

    // Exact bias (out-in)/(out+in); degree-0 tracked vertices report 0, the
    // class-boundary-safe value (they are endpoints of no edge, so they never
    // reach a density matrix anyway). Untracked vertices throw.
    Rational bias(Vertex v) const;

private:
    struct Degrees {
        std::uint64_t out = 0;
        std::uint64_t in = 0;
    };
    std::unordered_map<Vertex, Degrees> degrees_;
};

// Density matrix of a graph: classifies both endpoints of every edge by the
// graph's own biases.
DensityMatrix density_matrix(const DirectedMultigraph& g, const BiasThresholds& t);

// Density matrix of a subgraph: edge counts come from h_edges, classes from
// the profile's (typically full-graph) degrees. Every endpoint must be tracked.
DensityMatrix sub_density_matrix(const std::vector<Edge>& h_edges, const BiasProfile& profile,
                                 const BiasThresholds& t, std::uint64_t m_total);

// sum_{i,j} p_i (1-p_j) N(i,j) - (eps/8) m.
double oblivious_estimate(const DensityEstimate& n, const ObliviousScheme& scheme,
                          std::uint64_t m, double eps);
double oblivious_estimate(const DensityMatrix& n, const ObliviousScheme& scheme,
                          std::uint64_t m, double eps);

struct DicutSolution {
    std::uint64_t value = 0;
    std::vector<bool> in_left;  // in_left[v] == true puts v on the L side
};

inline constexpr std::uint32_t kDefaultBruteForceLimit = 24;

// Exact Max-DICUT by enumerating all 2^n partitions (Gray-code walk, so each
// step costs only the flipped vertex's degree).
DicutSolution exact_dicut(const DirectedMultigraph& g,
                          std::uint32_t vertex_limit = kDefaultBruteForceLimit);

}  // namespace dicut
