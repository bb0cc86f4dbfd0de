#include "dicut/harness.hpp"
#include "doctest.h"

using namespace dicut;

TEST_CASE("trial records round-trip byte-identically through JSON") {
    const DirectedMultigraph g = random_graph(10, 30, 5);
    RunConfig rc;
    rc.algorithm = AlgorithmId::kRandomOrder;
    rc.trials = 3;
    rc.seed = 17;
    const auto records = run_trials(g, ObliviousScheme::default_scheme(), rc);
    REQUIRE(records.size() == 3);
    for (const auto& r : records) {
        const std::string line = r.to_json().dump();
        const auto parsed = nlohmann::ordered_json::parse(line);
        CHECK(parsed.dump() == line);
        const TrialRecord back = TrialRecord::from_json(parsed);
        CHECK(back.to_json().dump() == line);
        CHECK(back.estimate == r.estimate);
        CHECK(back.seeds.stream == r.seeds.stream);
    }
}

TEST_CASE("worker pool does not change results or order") {
    const DirectedMultigraph g = random_graph(12, 50, 9);
    RunConfig base;
    base.algorithm = AlgorithmId::kTwoPass;
    base.order = StreamOrder::kSortedBySource;
    base.trials = 12;
    base.seed = 4;

    RunConfig pooled = base;
    pooled.jobs = 4;
    const auto serial = run_trials(g, ObliviousScheme::default_scheme(), base);
    const auto parallel = run_trials(g, ObliviousScheme::default_scheme(), pooled);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].trial == i);
        CHECK(serial[i].estimate == parallel[i].estimate);
        CHECK(serial[i].seeds.stream == parallel[i].seeds.stream);
        CHECK(serial[i].tracked_hw == parallel[i].tracked_hw);
    }
}

TEST_CASE("oversize oracle degrades to estimate-only records with the flag set") {
    const DirectedMultigraph g = random_graph(40, 60, 3);
    RunConfig rc;
    rc.trials = 1;
    rc.oracle_limit = 24;
    const auto records = run_trials(g, ObliviousScheme::default_scheme(), rc);
    CHECK(records[0].oracle_skipped);
    CHECK_FALSE(records[0].exact.has_value());
    CHECK_FALSE(records[0].ratio.has_value());
}

TEST_CASE("bounded-degree records carry branch metadata") {
    const DirectedMultigraph g = random_bounded_degree_graph(200, 150, 4, 8);
    RunConfig rc;
    rc.algorithm = AlgorithmId::kBoundedDegree;
    rc.order = StreamOrder::kAsGiven;
    rc.trials = 1;
    rc.c1_override = 2;  // force the hash branches to answer
    const auto records = run_trials(g, ObliviousScheme::default_scheme(), rc);
    CHECK(records[0].branch_used == "mhat=2^7");  // 128 <= 150 < 256
    CHECK_FALSE(records[0].failed_branches.empty());
    CHECK_FALSE(records[0].degree_assumption_violated);
}
