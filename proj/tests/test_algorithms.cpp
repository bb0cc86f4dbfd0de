#include <cmath>

#include "dicut/algorithms.hpp"
#include "doctest.h"

using namespace dicut;

namespace {

const BiasThresholds kTernary = BiasThresholds::ternary();

double entry(const DensityEstimate& e, std::size_t i, std::size_t j) { return e.at(i, j); }

}  // namespace

TEST_CASE("parameter formulas") {
    const AlgorithmParams p = AlgorithmParams::from_eps(0.1, 5);
    CHECK(p.eps_prime == doctest::Approx(0.1 / 200.0));
    CHECK(p.m0 >= 2 * p.k);
    CHECK(p.m0 >= static_cast<std::uint64_t>((2.0 + p.eps_prime) * p.k / p.eps_prime) - 1);
    // tail bound at this k is at most 1/(6 l^2)
    const double tail =
        std::exp(-p.eps_prime * p.eps_prime * static_cast<double>(p.k) /
                 (8.0 * (1.0 + p.eps_prime / 2.0)));
    CHECK(tail <= 1.0 / 150.0 + 1e-12);
    // C1 satisfies 2/(eps'^2 C1^2) <= 1/(100 l^2)
    CHECK(2.0 / (p.eps_prime * p.eps_prime * static_cast<double>(p.c1) *
                 static_cast<double>(p.c1)) <=
          1.0 / 2500.0 + 1e-12);
    CHECK_THROWS(AlgorithmParams::from_eps(0.5, 5));
    CHECK_THROWS(AlgorithmParams::from_eps(0.0, 5));
}

TEST_CASE("snapshot estimator returns the exact matrix when k >= m") {
    const DirectedMultigraph g = random_graph(10, 12, 3);
    const DensityMatrix reference = density_matrix(g, kTernary);
    SpaceMeter meter;
    const DensityEstimate est =
        random_order_estimate(permute_stream(g, 5), kTernary, 20, meter);
    CHECK(est.exact);
    CHECK(est.max_entry_error(reference) == doctest::Approx(0.0));
    CHECK(meter.tracked_vertices_hw() <= 2 * 12);
}

TEST_CASE("snapshot estimator on the empty stream") {
    const DirectedMultigraph g(3, {});
    SpaceMeter meter;
    const DensityEstimate est = random_order_estimate(permute_stream(g, 1), kTernary, 4, meter);
    CHECK(est.m == 0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(entry(est, i, j) == 0.0);
}

TEST_CASE("snapshot concentration: 200 edges, k=100, within 0.1 m in >= 90/100 orders") {
    const DirectedMultigraph g = random_graph(50, 200, 77);
    const DensityMatrix reference = density_matrix(g, kTernary);
    const double tolerance = 0.1 * static_cast<double>(g.m());
    std::size_t good = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        SpaceMeter meter;
        const DensityEstimate est =
            random_order_estimate(permute_stream(g, derive_seed(1, 2, trial)), kTernary, 100,
                                  meter);
        if (est.max_entry_error(reference) <= tolerance) good++;
    }
    CHECK(good >= 90);
}

TEST_CASE("snapshot estimate is unbiased over random orders") {
    // E[N(i,j)] = M(i,j): Monte Carlo mean within 3 standard errors
    const DirectedMultigraph g = random_graph(20, 60, 13);
    const DensityMatrix reference = density_matrix(g, kTernary);
    constexpr std::uint64_t kTrials = 4000, kSample = 15;
    std::vector<double> mean(9, 0.0), var(9, 0.0);
    std::vector<std::vector<double>> samples(kTrials);
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        SpaceMeter meter;
        const DensityEstimate est =
            random_order_estimate(permute_stream(g, derive_seed(4, 9, t)), kTernary, kSample,
                                  meter);
        samples[t] = est.values;
        for (std::size_t c = 0; c < 9; ++c) mean[c] += est.values[c];
    }
    for (std::size_t c = 0; c < 9; ++c) mean[c] /= kTrials;
    for (std::uint64_t t = 0; t < kTrials; ++t)
        for (std::size_t c = 0; c < 9; ++c) {
            const double d = samples[t][c] - mean[c];
            var[c] += d * d;
        }
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const std::size_t c = i * 3 + j;
            const double se = std::sqrt(var[c] / (kTrials - 1) / kTrials);
            CHECK(std::abs(mean[c] - static_cast<double>(reference.at(i, j))) <=
                  3.0 * se + 1e-9);
        }
}

TEST_CASE("random-order dicut") {
    const ObliviousScheme scheme = ObliviousScheme::default_scheme();
    const AlgorithmParams params = AlgorithmParams::from_eps(0.1, scheme.classes());

    SUBCASE("empty stream gives zero") {
        const DirectedMultigraph g(2, {});
        SpaceMeter meter;
        CHECK(random_order_dicut(permute_stream(g, 1), params, scheme, meter).estimate == 0.0);
    }
    SUBCASE("below m0 the output equals the exact-matrix estimate") {
        const DirectedMultigraph g = random_graph(9, 15, 8);
        SpaceMeter meter;
        const DicutEstimateOutput out =
            random_order_dicut(permute_stream(g, 3), params, scheme, meter);
        const double direct = oblivious_estimate(density_matrix(g, scheme.thresholds()), scheme,
                                                 g.m(), params.eps);
        CHECK(out.estimate == doctest::Approx(direct));
        CHECK(out.density.exact);
    }
    SUBCASE("sampled branch with overridden k and m0") {
        const DirectedMultigraph g = random_graph(20, 260, 10);
        const AlgorithmParams small = params.with_k(60).with_m0(120);
        const auto val = static_cast<double>(exact_dicut(g).value);
        std::size_t in_band = 0;
        for (std::uint64_t t = 0; t < 60; ++t) {
            SpaceMeter meter;
            const DicutEstimateOutput out =
                random_order_dicut(permute_stream(g, derive_seed(5, 5, t)), small, scheme, meter);
            CHECK_FALSE(out.density.exact);
            CHECK(out.estimate <= static_cast<double>(g.m()) * (1.0 + 1e-9));
            if (out.estimate >= 0.4 * val && out.estimate <= val) in_band++;
            CHECK(meter.tracked_vertices_hw() <= 2 * 60 + 2 * 120);
        }
        CHECK(in_band >= 40);  // 2/3 of 60
    }
}

TEST_CASE("two-pass dicut matches the exact-matrix estimate when k >= m") {
    const ObliviousScheme scheme = ObliviousScheme::default_scheme();
    const AlgorithmParams params = AlgorithmParams::from_eps(0.1, scheme.classes());
    const DirectedMultigraph g = random_graph(10, 25, 4);
    SpaceMeter meter;
    const DicutEstimateOutput out =
        two_pass_dicut(EdgeStream::sorted_by_source(g), params, scheme, 99, meter);
    const double direct =
        oblivious_estimate(density_matrix(g, scheme.thresholds()), scheme, g.m(), params.eps);
    CHECK(out.estimate == doctest::Approx(direct));

    const DirectedMultigraph empty(2, {});
    SpaceMeter meter2;
    CHECK(two_pass_dicut(permute_stream(empty, 0), params, scheme, 1, meter2).estimate == 0.0);
}

TEST_CASE("two-pass dicut survives adversarial order in the sampled branch") {
    const ObliviousScheme scheme = ObliviousScheme::default_scheme();
    const AlgorithmParams params =
        AlgorithmParams::from_eps(0.1, scheme.classes()).with_k(80).with_m0(160);
    const DirectedMultigraph g = random_graph(14, 400, 6);
    const auto val = static_cast<double>(exact_dicut(g).value);
    const EdgeStream stream = EdgeStream::sorted_by_source(g);
    std::size_t in_band = 0;
    for (std::uint64_t t = 0; t < 60; ++t) {
        SpaceMeter meter;
        const double est =
            two_pass_dicut(stream, params, scheme, derive_seed(6, 6, t), meter).estimate;
        if (est >= 0.4 * val && est <= val) in_band++;
    }
    CHECK(in_band >= 40);
}

TEST_CASE("bounded-degree estimator fail conditions") {
    SUBCASE("stream ends below the guess") {
        const DirectedMultigraph g = random_graph(20, 8, 2);  // m = mhat/2
        SpaceMeter meter;
        const BoundedDegreeEstimateResult r =
            bounded_degree_estimate(EdgeStream::as_given(g), kTernary, 2.0, 16, 1, meter);
        CHECK(r.failed());
        CHECK(r.fail == FailReason::kStreamTooShort);
    }
    SUBCASE("stream runs past twice the guess") {
        const DirectedMultigraph g = random_graph(20, 40, 2);
        SpaceMeter meter;
        const BoundedDegreeEstimateResult r =
            bounded_degree_estimate(EdgeStream::as_given(g), kTernary, 2.0, 16, 1, meter);
        CHECK(r.fail == FailReason::kStreamTooLong);
    }
    SUBCASE("s >= mhat tracks everything and reproduces the exact matrix") {
        const DirectedMultigraph g = random_graph(12, 20, 9);  // m in [16, 32)
        const DensityMatrix reference = density_matrix(g, kTernary);
        SpaceMeter meter;
        const BoundedDegreeEstimateResult r =
            bounded_degree_estimate(EdgeStream::as_given(g), kTernary, 8.0, 16, 1, meter);
        REQUIRE_FALSE(r.failed());
        CHECK(r.estimate->exact);
        CHECK(r.estimate->max_entry_error(reference) == doctest::Approx(0.0));
    }
}

TEST_CASE("bounded-degree estimator is unbiased over hash seeds when it succeeds") {
    // genuine subsampling: s < mhat, E[M_H(i,j)] = p^2 M(i,j)
    const DirectedMultigraph g = random_bounded_degree_graph(2000, 1500, 4, 31);
    const DensityMatrix reference = density_matrix(g, kTernary);
    const EdgeStream stream = EdgeStream::as_given(g);
    constexpr std::uint64_t kTrials = 1500;
    std::vector<double> mean(9, 0.0);
    std::vector<std::vector<double>> kept;
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        SpaceMeter meter;
        const BoundedDegreeEstimateResult r =
            bounded_degree_estimate(stream, kTernary, 4.0, 1024, derive_seed(8, 3, t), meter);
        REQUIRE_FALSE(r.failed());
        CHECK(meter.tracked_vertices_hw() <= r.tracked_cap);
        kept.push_back(r.estimate->values);
        for (std::size_t c = 0; c < 9; ++c) mean[c] += r.estimate->values[c];
    }
    for (std::size_t c = 0; c < 9; ++c) mean[c] /= static_cast<double>(kept.size());
    for (std::size_t c = 0; c < 9; ++c) {
        double var = 0.0;
        for (const auto& row : kept) {
            const double d = row[c] - mean[c];
            var += d * d;
        }
        const double se = std::sqrt(var / (kept.size() - 1) / kept.size());
        const std::size_t i = c / 3, j = c % 3;
        CHECK(std::abs(mean[c] - static_cast<double>(reference.at(i, j))) <= 4.0 * se + 1e-9);
    }
}

TEST_CASE("bounded-degree dicut wrapper") {
    const ObliviousScheme scheme = ObliviousScheme::default_scheme();

    SUBCASE("small instance goes through the exact branch") {
        const AlgorithmParams params = AlgorithmParams::from_eps(0.1, scheme.classes());
        const DirectedMultigraph g(2, {{0, 1}});
        SpaceMeter meter;
        const BoundedDegreeOutput out =
            bounded_degree_dicut(EdgeStream::as_given(g), 1, params, scheme, 7, meter);
        REQUIRE(out.estimate.has_value());
        CHECK(out.branch_used == "exact");
        // fully biased single edge: estimate 1 - eps/8
        CHECK(*out.estimate == doctest::Approx(1.0 - 0.1 / 8.0));
    }
    SUBCASE("large instance picks the mhat = 2^floor(log m) branch") {
        const AlgorithmParams params =
            AlgorithmParams::from_eps(0.1, scheme.classes()).with_c1(2);
        const DirectedMultigraph g = random_bounded_degree_graph(400, 300, 4, 17);
        // prefix capacity 2 c1^2 D = 32 < m, so a hash branch must answer
        SpaceMeter meter;
        const BoundedDegreeOutput out =
            bounded_degree_dicut(EdgeStream::as_given(g), 4, params, scheme, 21, meter);
        REQUIRE(out.estimate.has_value());
        CHECK(out.branch_b == 8);  // 2^8 = 256 <= 300 < 512
        CHECK_FALSE(out.failed_branches.empty());
        CHECK(*out.estimate <= static_cast<double>(g.m()) * (1.0 + 1e-9));
    }
    SUBCASE("end-to-end band on bounded-degree graphs") {
        const AlgorithmParams params = AlgorithmParams::from_eps(0.1, scheme.classes());
        std::size_t in_band = 0;
        constexpr std::size_t kTrials = 60;
        for (std::uint64_t t = 0; t < kTrials; ++t) {
            const DirectedMultigraph g =
                random_bounded_degree_graph(14, 18, 3, derive_seed(9, 1, t));
            const auto val = static_cast<double>(exact_dicut(g).value);
            SpaceMeter meter;
            const BoundedDegreeOutput out = bounded_degree_dicut(
                EdgeStream::as_given(g), 3, params, scheme, derive_seed(9, 2, t), meter);
            REQUIRE(out.estimate.has_value());
            if (*out.estimate >= 0.4 * val && *out.estimate <= val) in_band++;
        }
        CHECK(in_band >= 2 * kTrials / 3);
    }
}

TEST_CASE("determinism: identical seeds give identical outputs") {
    const ObliviousScheme scheme = ObliviousScheme::default_scheme();
    const AlgorithmParams params =
        AlgorithmParams::from_eps(0.2, scheme.classes()).with_k(40).with_m0(80);
    const DirectedMultigraph g = random_graph(25, 200, 12);
    SpaceMeter m1, m2;
    const double a =
        random_order_dicut(permute_stream(g, 42), params, scheme, m1).estimate;
    const double b =
        random_order_dicut(permute_stream(g, 42), params, scheme, m2).estimate;
    CHECK(a == b);
    CHECK(m1.tracked_vertices_hw() == m2.tracked_vertices_hw());

    SpaceMeter m3, m4;
    const double c = two_pass_dicut(EdgeStream::as_given(g), params, scheme, 9, m3).estimate;
    const double d = two_pass_dicut(EdgeStream::as_given(g), params, scheme, 9, m4).estimate;
    CHECK(c == d);
}

TEST_CASE("estimate never exceeds m, and never exceeds the optimum when the matrix is good") {
    const ObliviousScheme scheme = ObliviousScheme::default_scheme();
    const AlgorithmParams params =
        AlgorithmParams::from_eps(0.1, scheme.classes()).with_k(30).with_m0(60);
    for (std::uint64_t t = 0; t < 40; ++t) {
        const DirectedMultigraph g = random_graph(12, 100, derive_seed(11, 4, t));
        const DensityMatrix reference = density_matrix(g, scheme.thresholds());
        const auto val = static_cast<double>(exact_dicut(g).value);
        SpaceMeter meter;
        const DicutEstimateOutput out =
            random_order_dicut(permute_stream(g, derive_seed(11, 5, t)), params, scheme, meter);
        const double m = static_cast<double>(g.m());
        CHECK(out.estimate <= m + 1e-9 * m);
        const double eps_prime_m = params.eps_prime * m;
        if (out.density.max_entry_error(reference) <= eps_prime_m)
            CHECK(out.estimate <= val + 1e-9);  // upper half of the sandwich
    }
}
