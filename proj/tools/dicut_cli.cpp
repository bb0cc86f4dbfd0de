// Command-line harness: generate instances, run the streaming algorithms
// with seeded trials and space meters, run the verification suites, and
// summarize record files. Output is JSON lines (one record per line) or CSV.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dicut/csp.hpp"
#include "dicut/harness.hpp"
#include "dicut/hypergraph.hpp"
#include "dicut/verify.hpp"

namespace {

using nlohmann::ordered_json;

// flags > config file > defaults: copy a config value into an option the
// user did not pass on the command line
template <class T>
void apply_config(const CLI::App& app, const ordered_json& cfg, const std::string& key, T& dst) {
    const CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg.contains(key)) dst = cfg.at(key).get<T>();
}

ordered_json load_config(const std::string& path) {
    if (path.empty()) return ordered_json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return ordered_json::parse(in);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    return file;
}

dicut::ObliviousScheme scheme_or_default(const std::string& path) {
    return path.empty() ? dicut::ObliviousScheme::default_scheme()
                        : dicut::ObliviousScheme::load(path);
}

std::vector<dicut::FamilyMember> builtin_family(const std::string& name) {
    using dicut::ConstraintDistribution;
    using dicut::Predicate;
    if (name == "dicut") {
        std::vector<dicut::Rational> point(4, dicut::Rational(0));
        point[1] = dicut::Rational(1);  // the unique satisfying assignment (0,1)
        return {{Predicate::dicut(),
                 ConstraintDistribution::satisfying(Predicate::dicut(), point), 1.0}};
    }
    if (name == "cut")
        return {{Predicate::cut(), ConstraintDistribution::uniform_onewise(Predicate::cut()),
                 1.0}};
    throw std::invalid_argument("unknown family: " + name + " (expected dicut|cut)");
}

struct GenOpts {
    std::string config_path, out_path, kind = "graph", mode = "yes", family = "dicut";
    std::uint64_t seed = 1, m = 0, alpha_n = 0;
    std::uint32_t n = 10, k = 2, max_degree = 0;
    std::uint64_t t_hybrid = 0;
};

void setup_gen(CLI::App& app) {
    auto* gen = app.add_subcommand("gen", "generate graphs, RMD streams, hypergraphs, schemes");
    auto o = std::make_shared<GenOpts>();

    gen->add_option("kind", o->kind, "graph | rmd | instance | hypergraph | scheme | predicate")
        ->required();
    gen->add_option("--config", o->config_path, "JSON config file (flags take precedence)");
    gen->add_option("--out", o->out_path, "output file (stdout if omitted)");
    gen->add_option("--seed", o->seed, "sampling seed");
    gen->add_option("--n", o->n, "vertex / variable count");
    gen->add_option("--m", o->m, "edge count (graph)");
    gen->add_option("--k", o->k, "hyperedge arity (hypergraph)");
    gen->add_option("--alpha-n", o->alpha_n, "alpha*n: constraints (rmd) or hyperedges");
    gen->add_option("--max-degree", o->max_degree, "cap total degree (graph); 0 = uncapped");
    gen->add_option("--mode", o->mode, "rmd: yes | no | hybrid");
    gen->add_option("--t", o->t_hybrid, "rmd hybrid index (with --mode hybrid)");
    gen->add_option("--family", o->family, "rmd predicate family: dicut | cut");

    gen->callback([o, gen] {
        const ordered_json cfg = load_config(o->config_path);
        apply_config(*gen, cfg, "seed", o->seed);
        apply_config(*gen, cfg, "n", o->n);
        apply_config(*gen, cfg, "m", o->m);
        apply_config(*gen, cfg, "k", o->k);
        apply_config(*gen, cfg, "alpha-n", o->alpha_n);
        apply_config(*gen, cfg, "max-degree", o->max_degree);
        apply_config(*gen, cfg, "mode", o->mode);
        apply_config(*gen, cfg, "family", o->family);

        std::ofstream file;
        std::ostream& out = open_output(o->out_path, file);
        ordered_json record{{"command", "gen"}, {"kind", o->kind}, {"seed", o->seed}};

        if (o->kind == "graph") {
            const dicut::DirectedMultigraph g =
                o->max_degree > 0
                    ? dicut::random_bounded_degree_graph(o->n, o->m, o->max_degree, o->seed)
                    : dicut::random_graph(o->n, o->m, o->seed);
            g.write(out);
            record["n"] = o->n;
            record["m"] = o->m;
        } else if (o->kind == "rmd") {
            std::uint64_t t = 0;
            if (o->mode == "yes")
                t = o->alpha_n;
            else if (o->mode == "hybrid")
                t = o->t_hybrid;
            else if (o->mode != "no")
                throw std::invalid_argument("rmd mode must be yes|no|hybrid");
            const dicut::RmdStream stream =
                dicut::sample_rmd_stream(builtin_family(o->family), o->n, o->alpha_n, t, o->seed);
            stream.write(out);
            record["n"] = o->n;
            record["alpha_n"] = o->alpha_n;
            record["t"] = t;
            record["x_star"] = stream.x_star;
        } else if (o->kind == "instance") {
            // cleaned mask stream: yes-mode gives satisfiable instances,
            // no-mode near-trivial ones
            std::uint64_t t = o->mode == "yes"     ? o->alpha_n
                              : o->mode == "hybrid" ? o->t_hybrid
                                                    : 0;
            const dicut::RmdStream stream =
                dicut::sample_rmd_stream(builtin_family(o->family), o->n, o->alpha_n, t, o->seed);
            const dicut::CspInstance inst = dicut::clean(stream);
            inst.write(out);
            record["n"] = o->n;
            record["alpha_n"] = o->alpha_n;
            record["t"] = t;
            record["kept"] = inst.size();
            record["x_star"] = stream.x_star;
        } else if (o->kind == "hypergraph") {
            dicut::sample_hypergraph(o->n, o->k, o->alpha_n, o->seed).write(out);
            record["n"] = o->n;
            record["k"] = o->k;
            record["alpha_n"] = o->alpha_n;
        } else if (o->kind == "scheme") {
            scheme_or_default("").write(out);
        } else if (o->kind == "predicate") {
            const auto family = builtin_family(o->family);
            family.at(0).predicate.write(out);
            record["family"] = o->family;
        } else {
            throw std::invalid_argument("unknown kind: " + o->kind);
        }
        if (!o->out_path.empty()) std::cout << record.dump() << '\n';
    });
}

struct RunOpts {
    std::string config_path, out_path, input, scheme_path, algorithm = "random-order", order;
    bool csv = false;
    dicut::RunConfig rc;
    std::optional<std::uint64_t> k_override, m0_override, c1_override;
};

void setup_run(CLI::App& app) {
    auto* run = app.add_subcommand("run", "run a streaming algorithm over seeded trials");
    auto o = std::make_shared<RunOpts>();

    run->add_option("--algorithm", o->algorithm, "random-order | two-pass | bounded-degree");
    run->add_option("--input", o->input, "graph file")->required();
    run->add_option("--order", o->order, "stream order: random | given | sorted");
    run->add_option("--eps", o->rc.eps, "approximation slack");
    run->add_option("--trials", o->rc.trials, "number of independent trials");
    run->add_option("--seed", o->rc.seed, "base seed (per-trial seeds are derived)");
    run->add_option("--jobs", o->rc.jobs, "worker threads");
    run->add_option("--scheme", o->scheme_path, "oblivious scheme file (default: built-in)");
    run->add_option("--k", o->k_override, "override snapshot sample size");
    run->add_option("--m0", o->m0_override, "override small-instance cutoff");
    run->add_option("--c1", o->c1_override, "override bounded-degree constant");
    run->add_option("--max-degree", o->rc.max_degree,
                    "bounded-degree D (0: measure from graph)");
    run->add_option("--oracle-limit", o->rc.oracle_limit, "exact-oracle vertex limit");
    run->add_option("--config", o->config_path, "JSON config file (flags take precedence)");
    run->add_option("--out", o->out_path, "output file (stdout if omitted)");
    run->add_flag("--csv", o->csv, "emit a flattened CSV table instead of JSON lines");

    run->callback([o, run] {
        const ordered_json cfg = load_config(o->config_path);
        apply_config(*run, cfg, "algorithm", o->algorithm);
        apply_config(*run, cfg, "order", o->order);
        apply_config(*run, cfg, "eps", o->rc.eps);
        apply_config(*run, cfg, "trials", o->rc.trials);
        apply_config(*run, cfg, "seed", o->rc.seed);
        apply_config(*run, cfg, "jobs", o->rc.jobs);
        apply_config(*run, cfg, "scheme", o->scheme_path);
        apply_config(*run, cfg, "max-degree", o->rc.max_degree);
        apply_config(*run, cfg, "oracle-limit", o->rc.oracle_limit);

        o->rc.algorithm = dicut::parse_algorithm(o->algorithm);
        if (o->order.empty())
            o->rc.order = o->rc.algorithm == dicut::AlgorithmId::kRandomOrder
                              ? dicut::StreamOrder::kRandom
                              : dicut::StreamOrder::kAsGiven;
        else
            o->rc.order = dicut::parse_order(o->order);
        o->rc.k_override = o->k_override;
        o->rc.m0_override = o->m0_override;
        o->rc.c1_override = o->c1_override;

        const dicut::DirectedMultigraph graph = dicut::DirectedMultigraph::load(o->input);
        const dicut::ObliviousScheme scheme = scheme_or_default(o->scheme_path);
        const auto records = dicut::run_trials(graph, scheme, o->rc);

        std::ofstream file;
        std::ostream& out = open_output(o->out_path, file);
        if (o->csv) {
            out << dicut::TrialRecord::csv_header() << '\n';
            for (const auto& r : records) out << r.to_csv() << '\n';
        } else {
            const ordered_json header{
                {"command", "run"},
                {"input", o->input},
                {"algorithm", o->algorithm},
                {"order", to_string(o->rc.order)},
                {"eps", o->rc.eps},
                {"trials", o->rc.trials},
                {"seed", o->rc.seed},
                {"jobs", o->rc.jobs},
                {"scheme", o->scheme_path.empty() ? "default" : o->scheme_path},
                {"oracle_limit", o->rc.oracle_limit}};
            out << header.dump() << '\n';
            for (const auto& r : records) out << r.to_json().dump() << '\n';
        }
    });
}

struct VerifyOpts {
    std::string config_path, out_path, suite = "all", scheme_path;
    dicut::VerifyOptions vo;
};

void setup_verify(CLI::App& app, int& exit_code) {
    auto* verify = app.add_subcommand("verify", "run an acceptance-criteria suite");
    auto o = std::make_shared<VerifyOpts>();

    verify->add_option("--suite", o->suite,
                       "sandwich | concentration | reservoir | hash | rmd | hypergraph | all");
    verify->add_option("--seed", o->vo.seed, "base seed");
    verify->add_option("--scheme", o->scheme_path, "user scheme for the sandwich suite");
    verify->add_option("--fj-eps", o->vo.fj_eps, "slack for the user-scheme ratio floor");
    verify->add_option("--config", o->config_path, "JSON config file (flags take precedence)");
    verify->add_option("--out", o->out_path, "also write JSON lines here");

    verify->callback([o, verify, &exit_code] {
        const ordered_json cfg = load_config(o->config_path);
        apply_config(*verify, cfg, "suite", o->suite);
        apply_config(*verify, cfg, "seed", o->vo.seed);
        apply_config(*verify, cfg, "scheme", o->scheme_path);
        apply_config(*verify, cfg, "fj-eps", o->vo.fj_eps);
        if (!o->scheme_path.empty()) o->vo.scheme = dicut::ObliviousScheme::load(o->scheme_path);

        const auto results = o->suite == "all" ? dicut::verify_all(o->vo)
                                               : dicut::verify_suite(o->suite, o->vo);
        std::ofstream file;
        const bool to_file = !o->out_path.empty();
        std::ostream& json_out = to_file ? open_output(o->out_path, file) : std::cout;
        for (const auto& r : results) {
            const char* tag = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
            std::printf("[%s] %-16s %s\n       measured: %s  (%.2fs)\n", tag, r.id.c_str(),
                        r.description.c_str(), r.measured.c_str(), r.seconds);
            if (to_file) {
                const ordered_json j{{"id", r.id},
                                     {"description", r.description},
                                     {"pass", r.pass},
                                     {"informational", r.informational},
                                     {"measured", r.measured},
                                     {"seconds", r.seconds}};
                json_out << j.dump() << '\n';
            }
        }
        if (!dicut::all_passed(results)) exit_code = 1;
    });
}

struct AnalyzeOpts {
    std::string input, out_path;
    bool csv = false;
};

void setup_analyze(CLI::App& app) {
    auto* analyze = app.add_subcommand("analyze", "summarize a JSONL record file");
    auto o = std::make_shared<AnalyzeOpts>();

    analyze->add_option("--input", o->input, "JSONL records from `run`")->required();
    analyze->add_option("--out", o->out_path, "output file (stdout if omitted)");
    analyze->add_flag("--csv", o->csv, "emit the summary as CSV");

    analyze->callback([o] {
        std::ifstream in(o->input);
        if (!in) throw std::runtime_error("cannot open records file: " + o->input);
        std::size_t trials = 0, unavailable = 0, degree_violations = 0;
        double est_sum = 0, ratio_min = 1e300, ratio_sum = 0, err_max = 0, wall_sum = 0;
        std::size_t ratio_count = 0, err_count = 0;
        std::uint64_t tracked_max = 0, edges_max = 0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const ordered_json j = ordered_json::parse(line);
            if (!j.contains("trial")) continue;  // header line
            const dicut::TrialRecord r = dicut::TrialRecord::from_json(j);
            trials++;
            est_sum += r.estimate;
            wall_sum += r.wall_ms;
            if (!r.estimate_available) unavailable++;
            if (r.degree_assumption_violated) degree_violations++;
            if (r.ratio) {
                ratio_min = std::min(ratio_min, *r.ratio);
                ratio_sum += *r.ratio;
                ratio_count++;
            }
            if (r.density_error) {
                err_max = std::max(err_max, *r.density_error);
                err_count++;
            }
            tracked_max = std::max(tracked_max, r.tracked_hw);
            edges_max = std::max(edges_max, r.stored_edges_hw);
        }
        if (trials == 0) throw std::runtime_error("no trial records in " + o->input);

        std::ofstream file;
        std::ostream& out = open_output(o->out_path, file);
        if (o->csv) {
            out << "trials,estimate_mean,ratio_min,ratio_mean,density_error_max,"
                   "tracked_hw_max,stored_edges_hw_max,unavailable,degree_violations,"
                   "wall_ms_total\n";
            out << trials << ',' << est_sum / trials << ','
                << (ratio_count ? std::to_string(ratio_min) : "") << ','
                << (ratio_count ? std::to_string(ratio_sum / ratio_count) : "") << ','
                << (err_count ? std::to_string(err_max) : "") << ',' << tracked_max << ','
                << edges_max << ',' << unavailable << ',' << degree_violations << ','
                << wall_sum << '\n';
        } else {
            const ordered_json j{
                {"trials", trials},
                {"estimate_mean", est_sum / trials},
                {"ratio_min", ratio_count ? ordered_json(ratio_min) : nullptr},
                {"ratio_mean", ratio_count ? ordered_json(ratio_sum / ratio_count) : nullptr},
                {"density_error_max", err_count ? ordered_json(err_max) : nullptr},
                {"tracked_hw_max", tracked_max},
                {"stored_edges_hw_max", edges_max},
                {"unavailable", unavailable},
                {"degree_violations", degree_violations},
                {"wall_ms_total", wall_sum}};
            out << j.dump() << '\n';
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming Max-DICUT estimators and hard-instance lab"};
    app.require_subcommand(1);

    int exit_code = 0;
    setup_gen(app);
    setup_run(app);
    setup_verify(app, exit_code);
    setup_analyze(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
