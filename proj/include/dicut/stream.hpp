#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <vector>

#include "dicut/graph.hpp"
#include "dicut/rng.hpp"

namespace dicut {

// Materialized edge stream. The engine owns the edge order (it plays the role
// of nature/adversary); algorithms under test only ever see one symbol at a
// time through the run_* drivers below, so they cannot peek ahead or rewind.
class EdgeStream {
public:
    static EdgeStream as_given(const DirectedMultigraph& g);
    // Uniformly random order, a Fisher-Yates shuffle determined by the seed.
    static EdgeStream random_order(const DirectedMultigraph& g, std::uint64_t seed);
    // Adversarial order used by the benchmarks: sorted by source vertex
    // (stable, so parallel edges keep their relative order).
    static EdgeStream sorted_by_source(const DirectedMultigraph& g);

    std::uint32_t n() const { return n_; }
    std::uint64_t m() const { return edges_.size(); }
    const std::vector<Edge>& symbols() const { return edges_; }

private:
    EdgeStream(std::uint32_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {}
    std::uint32_t n_;
    std::vector<Edge> edges_;
};

inline EdgeStream permute_stream(const DirectedMultigraph& g, std::uint64_t seed) {
    return EdgeStream::random_order(g, seed);
}

// Logical space usage in item counts, not bytes; the verification suites
// compare these word-level counts against the algorithms' stated budgets.
struct SpaceUsage {
    std::uint64_t tracked_vertices = 0;
    std::uint64_t stored_edges = 0;
    std::uint64_t aux_words = 0;
};

class SpaceMeter {
public:
    void observe(const SpaceUsage& u) {
        tracked_ = std::max(tracked_, u.tracked_vertices);
        edges_ = std::max(edges_, u.stored_edges);
        aux_ = std::max(aux_, u.aux_words);
    }
    std::uint64_t tracked_vertices_hw() const { return tracked_; }
    std::uint64_t stored_edges_hw() const { return edges_; }
    std::uint64_t aux_words_hw() const { return aux_; }

private:
    std::uint64_t tracked_ = 0;
    std::uint64_t edges_ = 0;
    std::uint64_t aux_ = 0;
};

// Uniform sample of up to `capacity` items from a stream of unknown length
// (Algorithm R). After m >= k items each one is held with probability k/m.
template <class Item>
class Reservoir {
public:
    explicit Reservoir(std::uint64_t capacity) : capacity_(capacity) {}

    void step(const Item& item, Rng& rng) {
        seen_++;
        if (items_.size() < capacity_) {
            items_.push_back(item);
            return;
        }
        const std::uint64_t j = uniform_below(rng, seen_);  // j uniform in [0, seen)
        if (j < capacity_) items_[j] = item;
    }

    const std::vector<Item>& items() const { return items_; }
    std::uint64_t seen() const { return seen_; }
    std::uint64_t capacity() const { return capacity_; }

private:
    std::uint64_t capacity_;
    std::uint64_t seen_ = 0;
    std::vector<Item> items_;
};

template <class A>
concept SinglePassAlgorithm = requires(A a, const Edge& e) {
    a.process(e);
    a.finish();
    { a.usage() } -> std::convertible_to<SpaceUsage>;
};

template <class A>
concept TwoPassAlgorithm = requires(A a, const Edge& e) {
    a.pass1_process(e);
    a.between_passes();
    a.pass2_process(e);
    a.finish();
    { a.usage() } -> std::convertible_to<SpaceUsage>;
};

template <SinglePassAlgorithm A>
auto run_single_pass(A& alg, const EdgeStream& stream, SpaceMeter& meter) {
    for (const Edge& e : stream.symbols()) {
        alg.process(e);
        meter.observe(alg.usage());
    }
    meter.observe(alg.usage());
    return alg.finish();
}

// Both passes replay the identical symbol order; the stream is re-iterated,
// not re-permuted.
template <TwoPassAlgorithm A>
auto run_two_pass(A& alg, const EdgeStream& stream, SpaceMeter& meter) {
    for (const Edge& e : stream.symbols()) {
        alg.pass1_process(e);
        meter.observe(alg.usage());
    }
    alg.between_passes();
    meter.observe(alg.usage());
    for (const Edge& e : stream.symbols()) {
        alg.pass2_process(e);
        meter.observe(alg.usage());
    }
    return alg.finish();
}

}  // namespace dicut
