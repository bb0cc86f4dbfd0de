#include "dicut/stream.hpp"

#include <algorithm>

namespace dicut {

EdgeStream EdgeStream::as_given(const DirectedMultigraph& g) {
    return EdgeStream(g.n(), g.edges());
}

EdgeStream EdgeStream::random_order(const DirectedMultigraph& g, std::uint64_t seed) {
    std::vector<Edge> edges = g.edges();
    Rng rng = make_rng(seed);
    for (std::size_t i = edges.size(); i > 1; --i)
        std::swap(edges[i - 1], edges[uniform_below(rng, i)]);
    return EdgeStream(g.n(), std::move(edges));
}

EdgeStream EdgeStream::sorted_by_source(const DirectedMultigraph& g) {
    std::vector<Edge> edges = g.edges();
    std::stable_sort(edges.begin(), edges.end(),
                     [](const Edge& a, const Edge& b) { return a.from < b.from; });
    return EdgeStream(g.n(), std::move(edges));
}

}  // namespace dicut
