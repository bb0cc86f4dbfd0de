#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicut/graph.hpp"
#include "dicut/hashing.hpp"
#include "dicut/stream.hpp"

namespace dicut {

// Measured approximation floor of the shipped default scheme over the
// sandwich verification corpus; eps must stay below it.
inline constexpr double kDefaultSchemeFloor = 0.45;

// Concrete parameter choices for the snapshot algorithms. The sample size k
// makes both one-sided tails exp(-eps'^2 k / (8 (1 + eps'/2))) of the
// concentration bound at most 1/(6 l^2), so a union bound over the l^2
// matrix entries and 2 tails leaves failure probability <= 1/3; m0 enforces
// the two side conditions m0 >= 2k and m0 >= (2 + eps') k / eps'. C1 makes
// the bounded-degree variance term 2/(eps'^2 C1^2) at most 1/(100 l^2).
struct AlgorithmParams {
    double eps = 0.1;
    std::size_t classes = 0;
    double eps_prime = 0.0;
    std::uint64_t k = 0;
    std::uint64_t m0 = 0;
    std::uint64_t c1 = 0;

    static AlgorithmParams from_eps(double eps, std::size_t classes);
    AlgorithmParams with_k(std::uint64_t k_override) const;
    AlgorithmParams with_m0(std::uint64_t m0_override) const;
    AlgorithmParams with_c1(std::uint64_t c1_override) const;
};

// Snapshot estimator for randomly ordered streams: stores the first k edges
// as the sample H and tracks the full-graph degrees of their endpoints over
// the whole stream (the stored prefix itself included). Returns the exact
// density matrix when the stream turns out to have m <= k edges, otherwise
// the sampled counts rescaled by m/k.
class SnapshotEstimator {
public:
    SnapshotEstimator(BiasThresholds thresholds, std::uint64_t k);

    void process(const Edge& e);
    DensityEstimate finish() const;
    SpaceUsage usage() const;

private:
    BiasThresholds t_;
    std::uint64_t k_;
    std::uint64_t m_ = 0;
    std::vector<Edge> stored_;
    BiasProfile profile_;
};

DensityEstimate random_order_estimate(const EdgeStream& stream, const BiasThresholds& t,
                                      std::uint64_t k, SpaceMeter& meter);

struct DicutEstimateOutput {
    double estimate = 0.0;
    std::uint64_t m = 0;
    DensityEstimate density;
};

// Single-pass algorithm for randomly ordered streams: prefix of m0 edges for
// the small-instance exact branch, snapshot estimate otherwise, then the
// oblivious-scheme value with the eps/8 margin subtracted.
class RandomOrderDicutAlg {
public:
    RandomOrderDicutAlg(ObliviousScheme scheme, AlgorithmParams params);

    void process(const Edge& e);
    DicutEstimateOutput finish() const;
    SpaceUsage usage() const;

private:
    ObliviousScheme scheme_;
    AlgorithmParams params_;
    SnapshotEstimator snapshot_;
    std::vector<Edge> prefix_;
    std::uint64_t m_ = 0;
};

DicutEstimateOutput random_order_dicut(const EdgeStream& stream, const AlgorithmParams& params,
                                       const ObliviousScheme& scheme, SpaceMeter& meter);

// Two-pass variant for adversarial order: pass 1 reservoir-samples k edges
// (and keeps the first m0 as the exact-branch prefix), pass 2 measures the
// full-graph biases of the sampled endpoints.
class TwoPassDicutAlg {
public:
    TwoPassDicutAlg(ObliviousScheme scheme, AlgorithmParams params, std::uint64_t coin_seed);

    void pass1_process(const Edge& e);
    void between_passes();
    void pass2_process(const Edge& e);
    DicutEstimateOutput finish() const;
    SpaceUsage usage() const;

private:
    ObliviousScheme scheme_;
    AlgorithmParams params_;
    Reservoir<Edge> reservoir_;
    std::vector<Edge> prefix_;
    BiasProfile profile_;
    Rng coins_;
    std::uint64_t m_ = 0;
};

DicutEstimateOutput two_pass_dicut(const EdgeStream& stream, const AlgorithmParams& params,
                                   const ObliviousScheme& scheme, std::uint64_t coin_seed,
                                   SpaceMeter& meter);

enum class FailReason { kNone, kVertexCap, kStreamTooShort, kStreamTooLong };

std::string to_string(FailReason reason);

struct BoundedDegreeEstimateResult {
    std::optional<DensityEstimate> estimate;
    FailReason fail = FailReason::kNone;
    std::uint64_t m = 0;
    std::uint64_t tracked_cap = 0;  // ceil((5 s min{n, 4 mhat}) / mhat)

    bool failed() const { return fail != FailReason::kNone; }
};

// Single guess mhat of the edge count (Algorithm 4): hashes vertices into
// [mhat] with a 4-wise independent hash, tracks a vertex iff its hash lands
// below s = k sqrt(mhat) (capped at mhat), keeps edges with both endpoints
// tracked, and fails fast once the tracked count passes its cap or at the
// end if m lands outside [mhat, 2 mhat). Fail is a value, not an error.
class BoundedDegreeEstimator {
public:
    BoundedDegreeEstimator(std::uint32_t n, BiasThresholds thresholds, double k,
                           std::uint64_t m_hat, std::uint64_t hash_seed);

    void process(const Edge& e);
    BoundedDegreeEstimateResult finish() const;
    SpaceUsage usage() const;

    std::uint64_t s() const { return s_; }
    std::uint64_t m_hat() const { return m_hat_; }

private:
    std::uint32_t n_;
    BiasThresholds t_;
    std::uint64_t m_hat_;
    std::uint64_t s_;
    std::uint64_t reach_;  // min{n, 4 mhat}
    std::uint64_t cap_;
    KwiseHash hash_;
    std::uint64_t m_ = 0;
    std::uint64_t n_hat_ = 0;
    bool cap_failed_ = false;
    std::vector<Edge> subgraph_;
    BiasProfile profile_;
};

BoundedDegreeEstimateResult bounded_degree_estimate(const EdgeStream& stream,
                                                    const BiasThresholds& t, double k,
                                                    std::uint64_t m_hat, std::uint64_t hash_seed,
                                                    SpaceMeter& meter);

struct BoundedDegreeOutput {
    std::optional<double> estimate;  // empty <=> estimate unavailable (recorded outcome)
    std::uint64_t m = 0;
    int branch_b = -1;  // -1 <=> exact prefix branch
    std::string branch_used;
    std::vector<int> failed_branches;
    DensityEstimate density;
};

// Algorithm 3: all power-of-two guesses run concurrently over one pass, each
// with its own hash seed; the answer comes from the largest non-failing
// branch, or from the stored prefix when m < 2 C1^2 D.
class BoundedDegreeDicutAlg {
public:
    BoundedDegreeDicutAlg(std::uint32_t n, std::uint32_t max_degree, ObliviousScheme scheme,
                          AlgorithmParams params, std::uint64_t hash_seed);

    void process(const Edge& e);
    BoundedDegreeOutput finish() const;
    SpaceUsage usage() const;

private:
    ObliviousScheme scheme_;
    AlgorithmParams params_;
    std::uint64_t prefix_capacity_;
    std::vector<Edge> prefix_;
    std::vector<BoundedDegreeEstimator> branches_;
    std::uint64_t m_ = 0;
};

BoundedDegreeOutput bounded_degree_dicut(const EdgeStream& stream, std::uint32_t max_degree,
                                         const AlgorithmParams& params,
                                         const ObliviousScheme& scheme, std::uint64_t hash_seed,
                                         SpaceMeter& meter);

// Exact density matrix of the (sub)graph formed by `edges`, measuring bias
// on those edges alone; used by the small-instance branches, where the
// stored prefix is the whole graph.
DensityEstimate exact_density_from_edges(const std::vector<Edge>& edges,
                                         const BiasThresholds& t);

}  // namespace dicut
