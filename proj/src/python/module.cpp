#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "localint/csv.hpp"
#include "localint/estimators.hpp"
#include "localint/inference.hpp"
#include "localint/signature.hpp"
#include "localint/simgen.hpp"

namespace py = pybind11;
using namespace localint;

namespace {

py::dict report_dict(const EstimateReport& r) {
    py::dict d;
    d["estimand"] = to_string(r.estimand);
    d["point"] = r.point;
    d["n_used"] = r.n_used;
    d["trimmed_fraction"] = r.trimmed_fraction;
    d["adjustment"] = to_string(r.adjustment);
    d["n_strata"] = r.n_strata;
    return d;
}

py::dict interval_dict(const IntervalReport& r) {
    py::dict d;
    d["point"] = r.point;
    d["lo"] = r.lo;
    d["hi"] = r.hi;
    d["lo_inflated"] = r.lo_inflated;
    d["hi_inflated"] = r.hi_inflated;
    d["inflation_factor"] = r.inflation_factor;
    d["replicates"] = r.replicates;
    d["failed_replicates"] = r.failed_replicates;
    return d;
}

EstimatorSpec make_spec(const std::string& estimand, const std::vector<std::string>& x_cols,
                        const std::vector<std::string>& i_cols, const std::string& propensity,
                        int bins, double ridge, double clip, bool trim) {
    EstimatorSpec spec;
    spec.estimand = estimand == "tace"    ? Estimand::tace
                    : estimand == "tacrr" ? Estimand::tacrr
                                          : Estimand::naive_diff;
    spec.x_cols = x_cols;
    spec.i_cols = i_cols;
    spec.propensity = propensity == "logistic" ? PropensityKind::logistic : PropensityKind::cell;
    spec.bins = bins;
    spec.ridge = ridge;
    spec.clip = clip;
    spec.trim = trim;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_localint, m) {
    m.doc() = "causal effect estimation under local interference";

    py::register_exception<SchemaError>(m, "SchemaError");
    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<OverlapError>(m, "OverlapError");
    py::register_exception<EstimationError>(m, "EstimationError");

    py::class_<Dataset>(m, "Dataset")
        .def("__len__", &Dataset::size)
        .def_property_readonly("covariate_names", &Dataset::covariate_names)
        .def_property_readonly("signature_names", &Dataset::signature_names)
        .def("column", &Dataset::column)
        .def("outcomes", [](const Dataset& d) { return d.column("y"); })
        .def("treatments", [](const Dataset& d) { return d.column("t"); })
        .def("with_signature", &Dataset::with_signature);

    py::class_<AdjacencyGraph>(m, "AdjacencyGraph")
        .def(py::init<std::size_t, bool>(), py::arg("n"), py::arg("self_loops") = false)
        .def("add_edge", &AdjacencyGraph::add_edge)
        .def("adjacent", &AdjacencyGraph::adjacent)
        .def_property_readonly("n", &AdjacencyGraph::n);

    m.def("load_dataset", [](const std::string& path) { return load_dataset(path); });
    m.def("save_dataset", &save_dataset);
    m.def("load_adjacency", &load_adjacency, py::arg("path"), py::arg("n"),
          py::arg("self_loops"));

    m.def("context_fraction", &context_fraction);
    m.def("context_fraction_t_adjusted", &context_fraction_t_adjusted, py::arg("dataset"),
          py::arg("c") = 0.1);
    m.def("adjacency_average", [](const Dataset& d, const AdjacencyGraph& g) {
        const auto r = adjacency_average(d, g);
        return py::make_tuple(r.values, r.isolated_units);
    });
    m.def("inverse_square_distance", &inverse_square_distance, py::arg("dataset"),
          py::arg("floor") = 1e-6);

    m.def(
        "estimate",
        [](const Dataset& ds, const std::string& estimand, const std::vector<std::string>& x_cols,
           const std::vector<std::string>& i_cols, const std::string& propensity, int bins,
           double ridge, double clip, bool trim) {
            return report_dict(run_estimator(
                ds, make_spec(estimand, x_cols, i_cols, propensity, bins, ridge, clip, trim)));
        },
        py::arg("dataset"), py::arg("estimand") = "tace",
        py::arg("x_cols") = std::vector<std::string>{},
        py::arg("i_cols") = std::vector<std::string>{}, py::arg("propensity") = "cell",
        py::arg("bins") = 10, py::arg("ridge") = 1e-6, py::arg("clip") = 0.01,
        py::arg("trim") = false);

    m.def(
        "bootstrap",
        [](const Dataset& ds, const std::string& estimand, const std::vector<std::string>& x_cols,
           const std::vector<std::string>& i_cols, const std::string& propensity, int bins,
           double ridge, double clip, bool trim, int replicates, std::uint64_t seed,
           const std::optional<std::string>& cluster_col, int threads) {
            BootstrapConfig cfg;
            cfg.replicates = replicates;
            cfg.seed = seed;
            cfg.cluster_col = cluster_col;
            cfg.threads = threads;
            return interval_dict(bootstrap(
                ds, make_spec(estimand, x_cols, i_cols, propensity, bins, ridge, clip, trim),
                cfg));
        },
        py::arg("dataset"), py::arg("estimand") = "tace",
        py::arg("x_cols") = std::vector<std::string>{},
        py::arg("i_cols") = std::vector<std::string>{}, py::arg("propensity") = "cell",
        py::arg("bins") = 10, py::arg("ridge") = 1e-6, py::arg("clip") = 0.01,
        py::arg("trim") = false, py::arg("replicates") = 1000, py::arg("seed") = 0,
        py::arg("cluster_col") = std::nullopt, py::arg("threads") = 1);

    m.def("dependence_summary", [](const AdjacencyGraph& g) {
        const auto s = dependence_summary(g);
        py::dict d;
        d["d_per_unit"] = s.d_per_unit;
        d["d_avg"] = s.d_avg;
        d["d_max"] = s.d_max;
        d["d_sr"] = s.d_sr;
        return d;
    });

    m.def(
        "gen_basic",
        [](std::size_t n_units, std::size_t n_contexts, std::uint64_t seed, double noise_sd) {
            const auto g = gen_basic({n_units, n_contexts, seed, noise_sd, 0.1, DgpKind::basic});
            return py::make_tuple(g.dataset, g.ground_truth);
        },
        py::arg("n_units"), py::arg("n_contexts"), py::arg("seed"), py::arg("noise_sd") = 1.0);
    m.def(
        "gen_t_dependent",
        [](std::size_t n_units, std::size_t n_contexts, std::uint64_t seed, double noise_sd,
           double t_adjustment) {
            const auto g = gen_t_dependent(
                {n_units, n_contexts, seed, noise_sd, t_adjustment, DgpKind::t_dependent});
            return py::make_tuple(g.dataset, g.ground_truth);
        },
        py::arg("n_units"), py::arg("n_contexts"), py::arg("seed"), py::arg("noise_sd") = 1.0,
        py::arg("t_adjustment") = 0.1);
    m.def(
        "gen_product",
        [](std::size_t n_units, std::size_t n_contexts, std::uint64_t seed, double noise_sd) {
            const auto g = gen_product({n_units, n_contexts, seed, noise_sd, 0.1, DgpKind::product});
            return py::make_tuple(g.dataset, g.ground_truth);
        },
        py::arg("n_units"), py::arg("n_contexts"), py::arg("seed"), py::arg("noise_sd") = 1.0);
    m.def("gen_counterexample_pair", [](std::size_t n, std::uint64_t seed, double c, double alpha,
                                        double alpha2, double beta) {
        const auto p = gen_counterexample_pair(n, seed, c, alpha, alpha2, beta);
        return py::make_tuple(p.model1, p.model2, p.tace1, p.tace2);
    });
    m.def(
        "toy_linear",
        [](int example, double alpha, double beta, double gamma, double rho, double delta) {
            const auto r = toy_linear(example, {alpha, beta, gamma, rho, delta, 1, 1, 0});
            py::dict d;
            d["y1"] = r.y1;
            d["y2"] = r.y2;
            d["y3"] = r.y3;
            d["recovered_alpha"] = r.recovered_alpha;
            d["bias"] = r.bias;
            return d;
        },
        py::arg("example"), py::arg("alpha"), py::arg("beta") = 0.0, py::arg("gamma") = 0.0,
        py::arg("rho") = 0.0, py::arg("delta") = 0.0);
    m.def("inject_interference", &inject_interference);
}
