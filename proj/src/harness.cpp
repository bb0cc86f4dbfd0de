#include "dicut/harness.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dicut {

namespace {

// seed-derivation roles
constexpr std::uint64_t kRoleStream = 0x73;
constexpr std::uint64_t kRoleAlgorithm = 0x61;

}  // namespace

AlgorithmId parse_algorithm(const std::string& name) {
    if (name == "random-order") return AlgorithmId::kRandomOrder;
    if (name == "two-pass") return AlgorithmId::kTwoPass;
    if (name == "bounded-degree") return AlgorithmId::kBoundedDegree;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(AlgorithmId id) {
    switch (id) {
        case AlgorithmId::kRandomOrder: return "random-order";
        case AlgorithmId::kTwoPass: return "two-pass";
        case AlgorithmId::kBoundedDegree: return "bounded-degree";
    }
    return "unknown";
}

StreamOrder parse_order(const std::string& name) {
    if (name == "random") return StreamOrder::kRandom;
    if (name == "given") return StreamOrder::kAsGiven;
    if (name == "sorted") return StreamOrder::kSortedBySource;
    throw std::invalid_argument("unknown stream order: " + name);
}

std::string to_string(StreamOrder order) {
    switch (order) {
        case StreamOrder::kRandom: return "random";
        case StreamOrder::kAsGiven: return "given";
        case StreamOrder::kSortedBySource: return "sorted";
    }
    return "unknown";
}

nlohmann::ordered_json TrialRecord::to_json() const {
    nlohmann::ordered_json j;
    j["trial"] = trial;
    j["algorithm"] = algorithm;
    j["seeds"] = {{"stream", seeds.stream},
                  {"algorithm", seeds.algorithm},
                  {"instance", seeds.instance}};
    j["m"] = m;
    j["estimate_available"] = estimate_available;
    j["estimate"] = estimate;
    j["exact"] = exact ? nlohmann::ordered_json(*exact) : nlohmann::ordered_json(nullptr);
    j["ratio"] = ratio ? nlohmann::ordered_json(*ratio) : nlohmann::ordered_json(nullptr);
    j["density_error"] =
        density_error ? nlohmann::ordered_json(*density_error) : nlohmann::ordered_json(nullptr);
    j["space_highwater"] = {{"tracked_vertices", tracked_hw},
                            {"stored_edges", stored_edges_hw},
                            {"aux_words", aux_words_hw}};
    j["branch_used"] = branch_used;
    j["failed_branches"] = failed_branches;
    j["oracle_skipped"] = oracle_skipped;
    j["degree_assumption_violated"] = degree_assumption_violated;
    j["wall_ms"] = wall_ms;
    return j;
}

TrialRecord TrialRecord::from_json(const nlohmann::ordered_json& j) {
    TrialRecord r;
    r.trial = j.at("trial").get<std::uint64_t>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.seeds.stream = j.at("seeds").at("stream").get<std::uint64_t>();
    r.seeds.algorithm = j.at("seeds").at("algorithm").get<std::uint64_t>();
    r.seeds.instance = j.at("seeds").at("instance").get<std::uint64_t>();
    r.m = j.at("m").get<std::uint64_t>();
    r.estimate_available = j.at("estimate_available").get<bool>();
    r.estimate = j.at("estimate").get<double>();
    if (!j.at("exact").is_null()) r.exact = j.at("exact").get<double>();
    if (!j.at("ratio").is_null()) r.ratio = j.at("ratio").get<double>();
    if (!j.at("density_error").is_null()) r.density_error = j.at("density_error").get<double>();
    r.tracked_hw = j.at("space_highwater").at("tracked_vertices").get<std::uint64_t>();
    r.stored_edges_hw = j.at("space_highwater").at("stored_edges").get<std::uint64_t>();
    r.aux_words_hw = j.at("space_highwater").at("aux_words").get<std::uint64_t>();
    r.branch_used = j.at("branch_used").get<std::string>();
    r.failed_branches = j.at("failed_branches").get<std::vector<int>>();
    r.oracle_skipped = j.at("oracle_skipped").get<bool>();
    r.degree_assumption_violated = j.at("degree_assumption_violated").get<bool>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

std::string TrialRecord::csv_header() {
    return "trial,algorithm,seed_stream,seed_algorithm,seed_instance,m,estimate_available,"
           "estimate,exact,ratio,density_error,tracked_hw,stored_edges_hw,aux_words_hw,"
           "branch_used,failed_branches,oracle_skipped,degree_assumption_violated,wall_ms";
}

std::string TrialRecord::to_csv() const {
    std::ostringstream out;
    const auto opt = [](const std::optional<double>& v) {
        return v ? std::to_string(*v) : std::string();
    };
    out << trial << ',' << algorithm << ',' << seeds.stream << ',' << seeds.algorithm << ','
        << seeds.instance << ',' << m << ',' << (estimate_available ? 1 : 0) << ',' << estimate
        << ',' << opt(exact) << ',' << opt(ratio) << ',' << opt(density_error) << ','
        << tracked_hw << ',' << stored_edges_hw << ',' << aux_words_hw << ',' << branch_used
        << ',';
    for (std::size_t i = 0; i < failed_branches.size(); ++i)
        out << (i ? ";" : "") << failed_branches[i];
    out << ',' << (oracle_skipped ? 1 : 0) << ',' << (degree_assumption_violated ? 1 : 0) << ','
        << wall_ms;
    return out.str();
}

namespace {

TrialRecord run_one_trial(const DirectedMultigraph& graph, const ObliviousScheme& scheme,
                          const RunConfig& config, const std::optional<DicutSolution>& oracle,
                          const std::optional<DensityMatrix>& reference,
                          std::uint32_t max_degree, std::uint64_t trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.algorithm = to_string(config.algorithm);
    rec.seeds.stream = derive_seed(config.seed, kRoleStream, trial);
    rec.seeds.algorithm = derive_seed(config.seed, kRoleAlgorithm, trial);
    rec.seeds.instance = config.seed;

    const auto start = std::chrono::steady_clock::now();
    EdgeStream stream = config.order == StreamOrder::kRandom
                            ? EdgeStream::random_order(graph, rec.seeds.stream)
                        : config.order == StreamOrder::kSortedBySource
                            ? EdgeStream::sorted_by_source(graph)
                            : EdgeStream::as_given(graph);

    AlgorithmParams params = AlgorithmParams::from_eps(config.eps, scheme.classes());
    if (config.k_override) params = params.with_k(*config.k_override);
    if (config.m0_override) params = params.with_m0(*config.m0_override);
    if (config.c1_override) params = params.with_c1(*config.c1_override);

    SpaceMeter meter;
    DensityEstimate density;
    switch (config.algorithm) {
        case AlgorithmId::kRandomOrder: {
            const DicutEstimateOutput out = random_order_dicut(stream, params, scheme, meter);
            rec.estimate = out.estimate;
            rec.m = out.m;
            density = out.density;
            rec.branch_used = density.exact ? "exact" : "snapshot";
            break;
        }
        case AlgorithmId::kTwoPass: {
            const DicutEstimateOutput out =
                two_pass_dicut(stream, params, scheme, rec.seeds.algorithm, meter);
            rec.estimate = out.estimate;
            rec.m = out.m;
            density = out.density;
            rec.branch_used = density.exact ? "exact" : "reservoir";
            break;
        }
        case AlgorithmId::kBoundedDegree: {
            const BoundedDegreeOutput out = bounded_degree_dicut(
                stream, max_degree, params, scheme, rec.seeds.algorithm, meter);
            rec.m = out.m;
            rec.branch_used = out.branch_used;
            rec.failed_branches = out.failed_branches;
            rec.estimate_available = out.estimate.has_value();
            rec.estimate = out.estimate.value_or(0.0);
            density = out.density;
            rec.degree_assumption_violated = graph.max_total_degree() > max_degree;
            break;
        }
    }
    rec.tracked_hw = meter.tracked_vertices_hw();
    rec.stored_edges_hw = meter.stored_edges_hw();
    rec.aux_words_hw = meter.aux_words_hw();

    if (oracle) {
        rec.exact = static_cast<double>(oracle->value);
        if (oracle->value > 0 && rec.estimate_available)
            rec.ratio = rec.estimate / static_cast<double>(oracle->value);
        if (reference && rec.estimate_available && density.classes == reference->classes())
            rec.density_error = density.max_entry_error(*reference);
    } else {
        rec.oracle_skipped = true;
    }
    const auto stop = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return rec;
}

}  // namespace

std::vector<TrialRecord> run_trials(const DirectedMultigraph& graph, const ObliviousScheme& scheme,
                                    const RunConfig& config) {
    if (config.trials == 0) throw std::invalid_argument("run: need at least one trial");

    std::optional<DicutSolution> oracle;
    std::optional<DensityMatrix> reference;
    if (graph.n() <= config.oracle_limit) {
        oracle = exact_dicut(graph, config.oracle_limit);
        reference = density_matrix(graph, scheme.thresholds());
    }
    std::uint32_t max_degree = config.max_degree;
    if (config.algorithm == AlgorithmId::kBoundedDegree && max_degree == 0)
        max_degree = std::max<std::uint32_t>(1, graph.max_total_degree());

    std::vector<TrialRecord> records(config.trials);
    const unsigned jobs = std::max(1u, config.jobs);
    if (jobs == 1) {
        for (std::uint64_t t = 0; t < config.trials; ++t)
            records[t] = run_one_trial(graph, scheme, config, oracle, reference, max_degree, t);
        return records;
    }
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (unsigned w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t t = next.fetch_add(1);
                if (t >= config.trials) return;
                records[t] = run_one_trial(graph, scheme, config, oracle, reference, max_degree, t);
            }
        });
    }
    for (auto& th : pool) th.join();
    return records;
}

}  // namespace dicut
