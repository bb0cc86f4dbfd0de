#include "dicut/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicut {

AlgorithmParams AlgorithmParams::from_eps(double eps, std::size_t classes) {
    if (classes < 2) throw std::invalid_argument("params: need at least 2 bias classes");
    if (!(eps > 0.0 && eps < kDefaultSchemeFloor))
        throw std::invalid_argument("params: eps must lie in (0, 0.45)");
    AlgorithmParams p;
    p.eps = eps;
    p.classes = classes;
    const long double ell = static_cast<long double>(classes);
    const long double ep = static_cast<long double>(eps) / (8.0L * ell * ell);
    p.eps_prime = static_cast<double>(ep);
    const long double k_real = 8.0L * (1.0L + ep / 2.0L) / (ep * ep) * std::log(6.0L * ell * ell);
    p.k = static_cast<std::uint64_t>(std::ceil(k_real));
    const long double m0_real = (2.0L + ep) * static_cast<long double>(p.k) / ep;
    p.m0 = std::max<std::uint64_t>(2 * p.k, static_cast<std::uint64_t>(std::ceil(m0_real)));
    p.c1 = static_cast<std::uint64_t>(std::ceil(10.0L * std::sqrt(2.0L) * ell / ep));
    return p;
}

AlgorithmParams AlgorithmParams::with_k(std::uint64_t k_override) const {
    if (k_override == 0) throw std::invalid_argument("params: k must be positive");
    AlgorithmParams p = *this;
    p.k = k_override;
    return p;
}

AlgorithmParams AlgorithmParams::with_m0(std::uint64_t m0_override) const {
    if (m0_override == 0) throw std::invalid_argument("params: m0 must be positive");
    AlgorithmParams p = *this;
    p.m0 = m0_override;
    return p;
}

AlgorithmParams AlgorithmParams::with_c1(std::uint64_t c1_override) const {
    if (c1_override == 0) throw std::invalid_argument("params: C1 must be positive");
    AlgorithmParams p = *this;
    p.c1 = c1_override;
    return p;
}

SnapshotEstimator::SnapshotEstimator(BiasThresholds thresholds, std::uint64_t k)
    : t_(std::move(thresholds)), k_(k) {
    if (k_ == 0) throw std::invalid_argument("snapshot: k must be positive");
}

void SnapshotEstimator::process(const Edge& e) {
    m_++;
    if (stored_.size() < k_) {
        stored_.push_back(e);
        profile_.track(e.from);
        profile_.track(e.to);
    }
    // Tracking precedes the degree update, so the stored prefix's own
    // contribution to its endpoints' degrees is counted.
    profile_.observe(e);
}

DensityEstimate SnapshotEstimator::finish() const {
    const DensityMatrix sub = sub_density_matrix(stored_, profile_, t_, m_);
    if (m_ <= k_) return DensityEstimate::from_exact(sub);  // H is all of G
    DensityEstimate est;
    est.classes = sub.classes();
    est.m = m_;
    est.exact = false;
    est.values = sub.as_real();
    const double scale = static_cast<double>(m_) / static_cast<double>(k_);
    for (double& v : est.values) v *= scale;
    return est;
}

SpaceUsage SnapshotEstimator::usage() const {
    return {profile_.tracked_count(), stored_.size(), 1};
}

DensityEstimate random_order_estimate(const EdgeStream& stream, const BiasThresholds& t,
                                      std::uint64_t k, SpaceMeter& meter) {
    SnapshotEstimator alg(t, k);
    return run_single_pass(alg, stream, meter);
}

DensityEstimate exact_density_from_edges(const std::vector<Edge>& edges,
                                         const BiasThresholds& t) {
    BiasProfile profile;
    for (const Edge& e : edges) {
        profile.track(e.from);
        profile.track(e.to);
    }
    for (const Edge& e : edges) profile.observe(e);
    return DensityEstimate::from_exact(sub_density_matrix(edges, profile, t, edges.size()));
}

RandomOrderDicutAlg::RandomOrderDicutAlg(ObliviousScheme scheme, AlgorithmParams params)
    : scheme_(std::move(scheme)),
      params_(params),
      snapshot_(scheme_.thresholds(), params.k) {
    if (params_.classes != scheme_.classes())
        throw std::invalid_argument("random_order_dicut: params sized for a different scheme");
}

void RandomOrderDicutAlg::process(const Edge& e) {
    m_++;
    if (prefix_.size() < params_.m0) prefix_.push_back(e);
    snapshot_.process(e);
}

DicutEstimateOutput RandomOrderDicutAlg::finish() const {
    DicutEstimateOutput out;
    out.m = m_;
    out.density = m_ < params_.m0 ? exact_density_from_edges(prefix_, scheme_.thresholds())
                                  : snapshot_.finish();
    out.estimate = oblivious_estimate(out.density, scheme_, m_, params_.eps);
    return out;
}

SpaceUsage RandomOrderDicutAlg::usage() const {
    SpaceUsage u = snapshot_.usage();
    // Endpoints of the stored prefix count as held vertex state as well.
    u.tracked_vertices += 2 * prefix_.size();
    u.stored_edges += prefix_.size();
    u.aux_words += 1;
    return u;
}

DicutEstimateOutput random_order_dicut(const EdgeStream& stream, const AlgorithmParams& params,
                                       const ObliviousScheme& scheme, SpaceMeter& meter) {
    RandomOrderDicutAlg alg(scheme, params);
    return run_single_pass(alg, stream, meter);
}

TwoPassDicutAlg::TwoPassDicutAlg(ObliviousScheme scheme, AlgorithmParams params,
                                 std::uint64_t coin_seed)
    : scheme_(std::move(scheme)),
      params_(params),
      reservoir_(params.k),
      coins_(make_rng(coin_seed)) {
    if (params_.classes != scheme_.classes())
        throw std::invalid_argument("two_pass_dicut: params sized for a different scheme");
}

void TwoPassDicutAlg::pass1_process(const Edge& e) {
    m_++;
    if (prefix_.size() < params_.m0) prefix_.push_back(e);
    reservoir_.step(e, coins_);
}

void TwoPassDicutAlg::between_passes() {
    for (const Edge& e : reservoir_.items()) {
        profile_.track(e.from);
        profile_.track(e.to);
    }
}

void TwoPassDicutAlg::pass2_process(const Edge& e) { profile_.observe(e); }

DicutEstimateOutput TwoPassDicutAlg::finish() const {
    DicutEstimateOutput out;
    out.m = m_;
    if (m_ < params_.m0) {
        out.density = exact_density_from_edges(prefix_, scheme_.thresholds());
    } else if (m_ <= params_.k) {
        // The reservoir held everything; no rescaling.
        out.density = DensityEstimate::from_exact(
            sub_density_matrix(reservoir_.items(), profile_, scheme_.thresholds(), m_));
    } else {
        const DensityMatrix sub =
            sub_density_matrix(reservoir_.items(), profile_, scheme_.thresholds(), m_);
        out.density.classes = sub.classes();
        out.density.m = m_;
        out.density.exact = false;
        out.density.values = sub.as_real();
        const double scale = static_cast<double>(m_) / static_cast<double>(params_.k);
        for (double& v : out.density.values) v *= scale;
    }
    out.estimate = oblivious_estimate(out.density, scheme_, m_, params_.eps);
    return out;
}

SpaceUsage TwoPassDicutAlg::usage() const {
    SpaceUsage u;
    u.tracked_vertices = profile_.tracked_count() + 2 * reservoir_.items().size() +
                         2 * prefix_.size();
    u.stored_edges = reservoir_.items().size() + prefix_.size();
    u.aux_words = 2;
    return u;
}

DicutEstimateOutput two_pass_dicut(const EdgeStream& stream, const AlgorithmParams& params,
                                   const ObliviousScheme& scheme, std::uint64_t coin_seed,
                                   SpaceMeter& meter) {
    TwoPassDicutAlg alg(scheme, params, coin_seed);
    return run_two_pass(alg, stream, meter);
}

std::string to_string(FailReason reason) {
    switch (reason) {
        case FailReason::kNone: return "none";
        case FailReason::kVertexCap: return "vertex-cap";
        case FailReason::kStreamTooShort: return "stream-shorter-than-mhat";
        case FailReason::kStreamTooLong: return "stream-at-least-2mhat";
    }
    return "unknown";
}

BoundedDegreeEstimator::BoundedDegreeEstimator(std::uint32_t n, BiasThresholds thresholds,
                                               double k, std::uint64_t m_hat,
                                               std::uint64_t hash_seed)
    : n_(n),
      t_(std::move(thresholds)),
      m_hat_(m_hat),
      hash_(KwiseHash::sample(n, m_hat, 4, hash_seed)) {
    if (!(k >= 1.0)) throw std::invalid_argument("bounded_degree: k must be at least 1");
    const double s_real = k * std::sqrt(static_cast<double>(m_hat_));
    s_ = s_real >= static_cast<double>(m_hat_)
             ? m_hat_
             : static_cast<std::uint64_t>(std::floor(s_real));
    reach_ = std::min<std::uint64_t>(n_, 4 * m_hat_);
    // cap = ceil((5 s reach) / mhat), for reporting; the fail test below is
    // the exact integer comparison nhat mhat > 5 s reach.
    cap_ = static_cast<std::uint64_t>(
        (5 * static_cast<unsigned __int128>(s_) * reach_ + m_hat_ - 1) / m_hat_);
}

void BoundedDegreeEstimator::process(const Edge& e) {
    if (cap_failed_) return;  // halted
    m_++;
    const bool keep_from = hash_(e.from) < s_;
    const bool keep_to = hash_(e.to) < s_;
    if (keep_from && !profile_.tracked(e.from)) {
        profile_.track(e.from);
        n_hat_++;
    }
    if (keep_to && !profile_.tracked(e.to)) {
        profile_.track(e.to);
        n_hat_++;
    }
    profile_.observe(e);
    if (keep_from && keep_to) subgraph_.push_back(e);
    if (static_cast<unsigned __int128>(n_hat_) * m_hat_ >
        5 * static_cast<unsigned __int128>(s_) * reach_) {
        cap_failed_ = true;
        subgraph_.clear();
        subgraph_.shrink_to_fit();
        profile_ = BiasProfile();
    }
}

BoundedDegreeEstimateResult BoundedDegreeEstimator::finish() const {
    BoundedDegreeEstimateResult result;
    result.m = m_;
    result.tracked_cap = cap_;
    if (cap_failed_) {
        result.fail = FailReason::kVertexCap;
        return result;
    }
    if (m_ < m_hat_) {
        result.fail = FailReason::kStreamTooShort;
        return result;
    }
    if (m_ >= 2 * m_hat_) {
        result.fail = FailReason::kStreamTooLong;
        return result;
    }
    const DensityMatrix sub = sub_density_matrix(subgraph_, profile_, t_, m_);
    DensityEstimate est;
    est.classes = sub.classes();
    est.m = m_;
    est.exact = s_ == m_hat_;  // every vertex passed, H = G, scale factor 1
    est.values = sub.as_real();
    // estimate = (m / mu) * sampled counts with mu = m s^2 / mhat^2; m cancels.
    const double scale = static_cast<double>(m_hat_) * static_cast<double>(m_hat_) /
                         (static_cast<double>(s_) * static_cast<double>(s_));
    for (double& v : est.values) v *= scale;
    result.estimate = std::move(est);
    return result;
}

SpaceUsage BoundedDegreeEstimator::usage() const {
    return {profile_.tracked_count(), subgraph_.size(), hash_.independence() + 3};
}

BoundedDegreeEstimateResult bounded_degree_estimate(const EdgeStream& stream,
                                                    const BiasThresholds& t, double k,
                                                    std::uint64_t m_hat, std::uint64_t hash_seed,
                                                    SpaceMeter& meter) {
    BoundedDegreeEstimator alg(stream.n(), t, k, m_hat, hash_seed);
    return run_single_pass(alg, stream, meter);
}

BoundedDegreeDicutAlg::BoundedDegreeDicutAlg(std::uint32_t n, std::uint32_t max_degree,
                                             ObliviousScheme scheme, AlgorithmParams params,
                                             std::uint64_t hash_seed)
    : scheme_(std::move(scheme)), params_(params) {
    if (params_.classes != scheme_.classes())
        throw std::invalid_argument("bounded_degree_dicut: params sized for a different scheme");
    if (max_degree == 0) throw std::invalid_argument("bounded_degree_dicut: D must be positive");
    const unsigned __int128 cap = 2 * static_cast<unsigned __int128>(params_.c1) * params_.c1 *
                                  max_degree;
    prefix_capacity_ = cap > ~std::uint64_t{0} ? ~std::uint64_t{0}
                                               : static_cast<std::uint64_t>(cap);
    const double k = static_cast<double>(params_.c1) * std::sqrt(static_cast<double>(max_degree));
    const std::uint64_t half_nd = static_cast<std::uint64_t>(n) * max_degree / 2;
    for (int b = 0; half_nd >= (std::uint64_t{1} << b); ++b)
        branches_.emplace_back(n, scheme_.thresholds(), k, std::uint64_t{1} << b,
                               derive_seed(hash_seed, 0x62u, static_cast<std::uint64_t>(b)));
}

void BoundedDegreeDicutAlg::process(const Edge& e) {
    m_++;
    if (prefix_.size() < prefix_capacity_) prefix_.push_back(e);
    for (auto& branch : branches_) branch.process(e);
}

BoundedDegreeOutput BoundedDegreeDicutAlg::finish() const {
    BoundedDegreeOutput out;
    out.m = m_;

    std::optional<DensityEstimate> chosen;
    int chosen_b = -1;
    for (std::size_t b = 0; b < branches_.size(); ++b) {
        BoundedDegreeEstimateResult r = branches_[b].finish();
        if (r.failed()) {
            out.failed_branches.push_back(static_cast<int>(b));
        } else if (r.estimate) {
            // Largest non-failing guess wins; it is the mhat = 2^floor(log m)
            // branch whenever that one succeeds.
            chosen = std::move(r.estimate);
            chosen_b = static_cast<int>(b);
        }
    }

    if (m_ < prefix_capacity_ || (!chosen && m_ <= prefix_capacity_)) {
        out.density = exact_density_from_edges(prefix_, scheme_.thresholds());
        out.branch_used = "exact";
    } else if (chosen) {
        out.density = *chosen;
        out.branch_b = chosen_b;
        out.branch_used = "mhat=2^" + std::to_string(chosen_b);
    } else {
        out.branch_used = "unavailable";
        return out;  // estimate unavailable: recorded, counted against success
    }
    out.estimate = oblivious_estimate(out.density, scheme_, m_, params_.eps);
    return out;
}

SpaceUsage BoundedDegreeDicutAlg::usage() const {
    SpaceUsage u;
    u.tracked_vertices = 2 * prefix_.size();
    u.stored_edges = prefix_.size();
    u.aux_words = 1;
    for (const auto& branch : branches_) {
        const SpaceUsage b = branch.usage();
        u.tracked_vertices += b.tracked_vertices;
        u.stored_edges += b.stored_edges;
        u.aux_words += b.aux_words;
    }
    return u;
}

BoundedDegreeOutput bounded_degree_dicut(const EdgeStream& stream, std::uint32_t max_degree,
                                         const AlgorithmParams& params,
                                         const ObliviousScheme& scheme, std::uint64_t hash_seed,
                                         SpaceMeter& meter) {
    BoundedDegreeDicutAlg alg(stream.n(), max_degree, scheme, params, hash_seed);
    return run_single_pass(alg, stream, meter);
}

}  // namespace dicut
