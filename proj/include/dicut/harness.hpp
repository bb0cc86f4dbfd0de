#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicut/algorithms.hpp"
#include "dicut/graph.hpp"

#include "json.hpp"

namespace dicut {

enum class AlgorithmId { kRandomOrder, kTwoPass, kBoundedDegree };
enum class StreamOrder { kRandom, kAsGiven, kSortedBySource };

AlgorithmId parse_algorithm(const std::string& name);
std::string to_string(AlgorithmId id);
StreamOrder parse_order(const std::string& name);
std::string to_string(StreamOrder order);

struct TrialSeeds {
    std::uint64_t stream = 0;
    std::uint64_t algorithm = 0;
    std::uint64_t instance = 0;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    std::string algorithm;
    TrialSeeds seeds;
    std::uint64_t m = 0;
    bool estimate_available = true;
    double estimate = 0.0;
    std::optional<double> exact;          // oracle value, when it ran
    std::optional<double> ratio;          // estimate/exact, when exact > 0
    std::optional<double> density_error;  // max entrywise |estimate - exact matrix|
    std::uint64_t tracked_hw = 0;
    std::uint64_t stored_edges_hw = 0;
    std::uint64_t aux_words_hw = 0;
    std::string branch_used;
    std::vector<int> failed_branches;
    bool oracle_skipped = false;  // n above the brute-force limit
    bool degree_assumption_violated = false;
    double wall_ms = 0.0;

    nlohmann::ordered_json to_json() const;
    static TrialRecord from_json(const nlohmann::ordered_json& j);
    // Flattened CSV (matching csv_header()); list fields joined with ';'.
    static std::string csv_header();
    std::string to_csv() const;
};

struct RunConfig {
    AlgorithmId algorithm = AlgorithmId::kRandomOrder;
    StreamOrder order = StreamOrder::kRandom;
    double eps = 0.1;
    std::uint64_t trials = 1;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::uint32_t max_degree = 0;               // bounded-degree only; 0 = derive from graph
    std::optional<std::uint64_t> k_override;    // snapshot sample size
    std::optional<std::uint64_t> m0_override;   // small-instance cutoff
    std::optional<std::uint64_t> c1_override;   // bounded-degree constant
    std::uint32_t oracle_limit = kDefaultBruteForceLimit;
};

// Runs `trials` independent executions (per-trial derived seeds for stream
// order and algorithm coins); records land in trial order no matter how the
// worker pool schedules them.
std::vector<TrialRecord> run_trials(const DirectedMultigraph& graph, const ObliviousScheme& scheme,
                                    const RunConfig& config);

}  // namespace dicut
