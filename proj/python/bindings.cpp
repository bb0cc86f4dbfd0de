#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dicut/algorithms.hpp"
#include "dicut/csp.hpp"
#include "dicut/graph.hpp"
#include "dicut/harness.hpp"
#include "dicut/hashing.hpp"
#include "dicut/hypergraph.hpp"
#include "dicut/stream.hpp"
#include "dicut/verify.hpp"

namespace py = pybind11;
using namespace dicut;

namespace {

BiasThresholds thresholds_from(const std::vector<std::pair<std::int64_t, std::int64_t>>& t) {
    std::vector<Rational> values;
    values.reserve(t.size());
    for (const auto& [num, den] : t) values.emplace_back(num, den);
    return BiasThresholds(std::move(values));
}

DirectedMultigraph graph_from(std::uint32_t n,
                              const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (const auto& [u, v] : edges) es.push_back({u, v});
    return DirectedMultigraph(n, std::move(es));
}

std::vector<std::vector<double>> matrix_rows(const DensityEstimate& e) {
    std::vector<std::vector<double>> rows(e.classes, std::vector<double>(e.classes));
    for (std::size_t i = 0; i < e.classes; ++i)
        for (std::size_t j = 0; j < e.classes; ++j) rows[i][j] = e.at(i, j);
    return rows;
}

py::dict estimate_dict(const DicutEstimateOutput& out, const SpaceMeter& meter) {
    py::dict d;
    d["estimate"] = out.estimate;
    d["m"] = out.m;
    d["density"] = matrix_rows(out.density);
    d["density_exact"] = out.density.exact;
    d["tracked_hw"] = meter.tracked_vertices_hw();
    d["stored_edges_hw"] = meter.stored_edges_hw();
    return d;
}

ConstraintDistribution distribution_from(const Predicate& pred,
                                         const std::vector<std::pair<std::int64_t, std::int64_t>>& probs,
                                         bool require_onewise) {
    std::vector<Rational> rs;
    rs.reserve(probs.size());
    for (const auto& [num, den] : probs) rs.emplace_back(num, den);
    return require_onewise ? ConstraintDistribution::onewise(pred, std::move(rs))
                           : ConstraintDistribution::satisfying(pred, std::move(rs));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "streaming Max-DICUT estimators, CSP instance lab, hypergraph combinatorics";

    py::class_<DirectedMultigraph>(m, "Graph")
        .def(py::init(&graph_from), py::arg("n"), py::arg("edges"))
        .def_property_readonly("n", &DirectedMultigraph::n)
        .def_property_readonly("m", &DirectedMultigraph::m)
        .def_property_readonly("edges",
                               [](const DirectedMultigraph& g) {
                                   std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
                                   out.reserve(g.m());
                                   for (const Edge& e : g.edges()) out.emplace_back(e.from, e.to);
                                   return out;
                               })
        .def("max_total_degree", &DirectedMultigraph::max_total_degree)
        .def("save", &DirectedMultigraph::save, py::arg("path"))
        .def_static("load", &DirectedMultigraph::load, py::arg("path"));

    m.def("random_graph", &random_graph, py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def("random_bounded_degree_graph", &random_bounded_degree_graph, py::arg("n"),
          py::arg("m"), py::arg("max_degree"), py::arg("seed"));

    py::class_<BiasThresholds>(m, "BiasThresholds")
        .def(py::init(&thresholds_from), py::arg("values"),
             "thresholds as (numerator, denominator) pairs, -1 = t1 < ... < tl = 1")
        .def_property_readonly("classes", &BiasThresholds::classes)
        .def("class_of",
             [](const BiasThresholds& t, std::int64_t num, std::int64_t den) {
                 return t.class_of(Rational(num, den));
             },
             py::arg("num"), py::arg("den") = 1, "0-based class of an exact bias")
        .def_static("ternary", &BiasThresholds::ternary);

    py::class_<ObliviousScheme>(m, "Scheme")
        .def(py::init([](const std::vector<std::pair<std::int64_t, std::int64_t>>& t,
                         std::vector<double> probs) {
                 return ObliviousScheme(thresholds_from(t), std::move(probs));
             }),
             py::arg("thresholds"), py::arg("probs"))
        .def_property_readonly("classes", &ObliviousScheme::classes)
        .def_property_readonly("probs", &ObliviousScheme::probs)
        .def_property_readonly("thresholds",
                               [](const ObliviousScheme& s) {
                                   std::vector<std::pair<std::int64_t, std::int64_t>> out;
                                   for (const Rational& r : s.thresholds().values())
                                       out.emplace_back(r.num(), r.den());
                                   return out;
                               })
        .def_static("default_scheme", &ObliviousScheme::default_scheme)
        .def_static("load", &ObliviousScheme::load, py::arg("path"));

    m.def(
        "density_matrix",
        [](const DirectedMultigraph& g, const BiasThresholds& t) {
            const DensityMatrix dm = density_matrix(g, t);
            std::vector<std::vector<std::uint64_t>> rows(dm.classes(),
                                                         std::vector<std::uint64_t>(dm.classes()));
            for (std::size_t i = 0; i < dm.classes(); ++i)
                for (std::size_t j = 0; j < dm.classes(); ++j) rows[i][j] = dm.at(i, j);
            return rows;
        },
        py::arg("graph"), py::arg("thresholds"));

    m.def(
        "oblivious_estimate",
        [](const DirectedMultigraph& g, const ObliviousScheme& scheme, double eps) {
            return oblivious_estimate(density_matrix(g, scheme.thresholds()), scheme, g.m(), eps);
        },
        py::arg("graph"), py::arg("scheme"), py::arg("eps") = 0.0,
        "oblivious estimate on the exact density matrix of the graph");

    m.def(
        "exact_dicut",
        [](const DirectedMultigraph& g, std::uint32_t limit) {
            const DicutSolution sol = exact_dicut(g, limit);
            return py::make_tuple(sol.value, sol.in_left);
        },
        py::arg("graph"), py::arg("limit") = kDefaultBruteForceLimit,
        "(optimal value, assignment) by brute force; assignment[v] = True puts v in L");

    m.def(
        "random_order_dicut",
        [](const DirectedMultigraph& g, std::uint64_t stream_seed, double eps,
           const ObliviousScheme& scheme, std::optional<std::uint64_t> k,
           std::optional<std::uint64_t> m0) {
            AlgorithmParams params = AlgorithmParams::from_eps(eps, scheme.classes());
            if (k) params = params.with_k(*k);
            if (m0) params = params.with_m0(*m0);
            SpaceMeter meter;
            const EdgeStream stream = EdgeStream::random_order(g, stream_seed);
            return estimate_dict(random_order_dicut(stream, params, scheme, meter), meter);
        },
        py::arg("graph"), py::arg("stream_seed"), py::arg("eps") = 0.1,
        py::arg("scheme") = ObliviousScheme::default_scheme(), py::arg("k") = std::nullopt,
        py::arg("m0") = std::nullopt);

    m.def(
        "two_pass_dicut",
        [](const DirectedMultigraph& g, std::uint64_t coin_seed, double eps,
           const ObliviousScheme& scheme, std::optional<std::uint64_t> k,
           std::optional<std::uint64_t> m0, const std::string& order) {
            AlgorithmParams params = AlgorithmParams::from_eps(eps, scheme.classes());
            if (k) params = params.with_k(*k);
            if (m0) params = params.with_m0(*m0);
            SpaceMeter meter;
            const EdgeStream stream = order == "sorted" ? EdgeStream::sorted_by_source(g)
                                                        : EdgeStream::as_given(g);
            return estimate_dict(two_pass_dicut(stream, params, scheme, coin_seed, meter),
                                 meter);
        },
        py::arg("graph"), py::arg("coin_seed"), py::arg("eps") = 0.1,
        py::arg("scheme") = ObliviousScheme::default_scheme(), py::arg("k") = std::nullopt,
        py::arg("m0") = std::nullopt, py::arg("order") = "given");

    m.def(
        "bounded_degree_dicut",
        [](const DirectedMultigraph& g, std::uint32_t max_degree, std::uint64_t hash_seed,
           double eps, const ObliviousScheme& scheme, std::optional<std::uint64_t> c1) {
            AlgorithmParams params = AlgorithmParams::from_eps(eps, scheme.classes());
            if (c1) params = params.with_c1(*c1);
            SpaceMeter meter;
            const EdgeStream stream = EdgeStream::as_given(g);
            const BoundedDegreeOutput out =
                bounded_degree_dicut(stream, max_degree, params, scheme, hash_seed, meter);
            py::dict d;
            d["estimate"] = out.estimate ? py::cast(*out.estimate) : py::none();
            d["m"] = out.m;
            d["branch_used"] = out.branch_used;
            d["failed_branches"] = out.failed_branches;
            d["tracked_hw"] = meter.tracked_vertices_hw();
            return d;
        },
        py::arg("graph"), py::arg("max_degree"), py::arg("hash_seed"), py::arg("eps") = 0.1,
        py::arg("scheme") = ObliviousScheme::default_scheme(), py::arg("c1") = std::nullopt);

    py::class_<KwiseHash>(m, "KwiseHash")
        .def_static("sample", &KwiseHash::sample, py::arg("n"), py::arg("m_range"),
                    py::arg("k") = 4, py::arg("seed") = 0)
        .def("__call__", &KwiseHash::operator())
        .def_property_readonly("field_degree", &KwiseHash::field_degree)
        .def_property_readonly("range", &KwiseHash::range);

    py::class_<Predicate>(m, "Predicate")
        .def(py::init<std::uint32_t, std::uint32_t, std::vector<std::uint8_t>>(), py::arg("q"),
             py::arg("k"), py::arg("table"))
        .def_property_readonly("q", &Predicate::q)
        .def_property_readonly("k", &Predicate::k)
        .def_property_readonly("table", &Predicate::table)
        .def_static("dicut", &Predicate::dicut)
        .def_static("cut", &Predicate::cut)
        .def_static("const_one", &Predicate::const_one, py::arg("q"), py::arg("k"));

    py::class_<ConstraintDistribution>(m, "ConstraintDistribution")
        .def_static(
            "satisfying",
            [](const Predicate& p, const std::vector<std::pair<std::int64_t, std::int64_t>>& probs) {
                return distribution_from(p, probs, false);
            },
            py::arg("predicate"), py::arg("probs"),
            "distribution on Z_q^k supported on the satisfying set; probabilities as "
            "(num, den) pairs in lexicographic input order")
        .def_static(
            "onewise",
            [](const Predicate& p, const std::vector<std::pair<std::int64_t, std::int64_t>>& probs) {
                return distribution_from(p, probs, true);
            },
            py::arg("predicate"), py::arg("probs"))
        .def_static("uniform_onewise", &ConstraintDistribution::uniform_onewise,
                    py::arg("predicate"))
        .def("is_onewise", &ConstraintDistribution::is_onewise);

    py::class_<CspInstance>(m, "CspInstance")
        .def(py::init([](std::uint32_t n, const std::vector<Predicate>& preds,
                         const std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>&
                             constraints) {
                 std::vector<Constraint> cs;
                 cs.reserve(constraints.size());
                 for (const auto& [pid, vars] : constraints) cs.push_back({pid, vars});
                 return CspInstance(n, preds, std::move(cs));
             }),
             py::arg("n"), py::arg("predicates"), py::arg("constraints"))
        .def_property_readonly("n", &CspInstance::n)
        .def_property_readonly("size", &CspInstance::size)
        .def_property_readonly("constraints", [](const CspInstance& inst) {
            std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> out;
            for (const Constraint& c : inst.constraints()) out.emplace_back(c.predicate_id, c.vars);
            return out;
        });

    m.def(
        "val_at",
        [](const CspInstance& inst, const std::vector<std::uint8_t>& x) {
            const Rational v = val_at(inst, x);
            return py::make_tuple(v.num(), v.den());
        },
        py::arg("instance"), py::arg("assignment"),
        "exact fraction of satisfied constraints as (num, den)");

    m.def(
        "brute_force_val",
        [](const CspInstance& inst, std::uint64_t limit) {
            const Rational v = brute_force_val(inst, limit);
            return py::make_tuple(v.num(), v.den());
        },
        py::arg("instance"), py::arg("limit") = kDefaultCspEnumerationLimit);

    m.def("rho_inner_max", &rho_inner_max, py::arg("family"), py::arg("weights"),
          py::arg("grid") = 100);
    m.def("rho_min", &rho_min, py::arg("family"), py::arg("grid") = 100);

    py::class_<RmdStream>(m, "RmdStream")
        .def_property_readonly("n", [](const RmdStream& s) { return s.n; })
        .def_property_readonly("x_star", [](const RmdStream& s) { return s.x_star; })
        .def_property_readonly("symbols", [](const RmdStream& s) {
            std::vector<py::tuple> out;
            out.reserve(s.symbols.size());
            for (const RmdSymbol& sym : s.symbols)
                out.push_back(py::make_tuple(sym.predicate_id, sym.vars, sym.shift));
            return out;
        });

    m.def(
        "sample_rmd_stream",
        [](const std::vector<std::tuple<Predicate, ConstraintDistribution, double>>& family,
           std::uint32_t n, std::uint64_t num_constraints, std::uint64_t t_hybrid,
           std::uint64_t seed) {
            std::vector<FamilyMember> members;
            members.reserve(family.size());
            for (const auto& [pred, dist, weight] : family) members.push_back({pred, dist, weight});
            return sample_rmd_stream(members, n, num_constraints, t_hybrid, seed);
        },
        py::arg("family"), py::arg("n"), py::arg("num_constraints"), py::arg("t_hybrid"),
        py::arg("seed"),
        "family: list of (predicate, mask distribution, weight); t_hybrid = num_constraints "
        "is the yes distribution, 0 the no distribution");

    m.def("clean", &clean, py::arg("stream"),
          "instance keeping exactly the zero-shift constraints, in order");

    py::class_<Hypergraph>(m, "Hypergraph")
        .def(py::init<std::uint32_t, std::uint32_t, std::vector<std::vector<std::uint32_t>>>(),
             py::arg("n"), py::arg("k"), py::arg("hyperedges"))
        .def_property_readonly("n", &Hypergraph::n)
        .def_property_readonly("k", &Hypergraph::k)
        .def_property_readonly("m", &Hypergraph::m)
        .def_property_readonly("hyperedges", &Hypergraph::hyperedges);

    m.def("sample_hypergraph", &sample_hypergraph, py::arg("n"), py::arg("k"),
          py::arg("edge_count"), py::arg("seed"));
    m.def("is_cycle_free", &is_cycle_free, py::arg("hypergraph"));
    m.def(
        "cc_part",
        [](const Hypergraph& g, const std::vector<std::uint32_t>& u) {
            const CcPartition p = cc_part(g, u);
            py::dict d;
            d["parts"] = p.parts;
            d["l_type"] = p.l_type;
            d["r_type"] = p.r_type;
            d["r_total"] = p.r_total;
            d["valid"] = p.valid;
            return d;
        },
        py::arg("hypergraph"), py::arg("u"));
    m.def("count_s_vectors", &count_s_vectors, py::arg("hypergraph"), py::arg("q"), py::arg("v"),
          py::arg("limit") = kDefaultSvectorLimit);
    m.def("estimate_h", &estimate_h, py::arg("n"), py::arg("k"), py::arg("q"),
          py::arg("edge_count"), py::arg("ell"), py::arg("samples"), py::arg("seed"),
          py::arg("limit") = kDefaultSvectorLimit);
    m.def(
        "cycle_probability",
        [](std::uint32_t n, std::uint32_t k, std::uint64_t edge_count, std::uint64_t trials,
           std::uint64_t seed) {
            const CycleProbability c = cycle_probability(n, k, edge_count, trials, seed);
            py::dict d;
            d["estimate"] = c.estimate;
            d["std_error"] = c.std_error;
            d["trials"] = c.trials;
            d["cyclic"] = c.cyclic;
            return d;
        },
        py::arg("n"), py::arg("k"), py::arg("edge_count"), py::arg("trials"), py::arg("seed"));

    m.def(
        "verify_suite",
        [](const std::string& suite, std::uint64_t seed) {
            VerifyOptions opts;
            opts.seed = seed;
            const auto results =
                suite == "all" ? verify_all(opts) : verify_suite(suite, opts);
            std::vector<py::dict> out;
            for (const auto& r : results) {
                py::dict d;
                d["id"] = r.id;
                d["pass"] = r.pass;
                d["informational"] = r.informational;
                d["measured"] = r.measured;
                out.push_back(d);
            }
            return out;
        },
        py::arg("suite"), py::arg("seed") = 1);
}
