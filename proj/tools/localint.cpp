// localint: simulate, build signatures, inject interference, estimate
// causal effects, and inflate bootstrap intervals, all from the shell.

#include <cstdio>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "localint/csv.hpp"
#include "localint/estimators.hpp"
#include "localint/inference.hpp"
#include "localint/signature.hpp"
#include "localint/simgen.hpp"

using json = nlohmann::ordered_json;
using namespace localint;

namespace {

enum class Format { table, jsonl };

void emit(const json& obj, Format fmt) {
    if (fmt == Format::jsonl) {
        std::cout << obj.dump() << "\n";
        return;
    }
    std::size_t width = 0;
    for (const auto& [k, v] : obj.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : obj.items()) {
        std::cout << k << std::string(width - k.size() + 2, ' ');
        if (v.is_number_float()) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6g", v.get<double>());
            std::cout << buf;
        } else if (v.is_string()) {
            std::cout << v.get<std::string>();
        } else {
            std::cout << v.dump();
        }
        std::cout << "\n";
    }
}

json report_json(const EstimateReport& r) {
    return json{{"estimand", to_string(r.estimand)},
                {"point", r.point},
                {"n_used", r.n_used},
                {"trimmed_fraction", r.trimmed_fraction},
                {"adjustment", to_string(r.adjustment)},
                {"n_strata", r.n_strata},
                {"clipped_predictions", r.clipped_predictions}};
}

json interval_json(const IntervalReport& r) {
    return json{{"point", r.point},
                {"lo", r.lo},
                {"hi", r.hi},
                {"lo_inflated", r.lo_inflated},
                {"hi_inflated", r.hi_inflated},
                {"inflation_factor", r.inflation_factor},
                {"inflation_method", r.inflation_method ? to_string(*r.inflation_method)
                                                        : std::string("none")},
                {"replicates", r.replicates},
                {"seed", r.seed},
                {"failed_replicates", r.failed_replicates}};
}

json summary_json(const DependenceSummary& s) {
    return json{{"d_avg", s.d_avg}, {"d_max", s.d_max}, {"d_sr", s.d_sr}};
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// A flat JSON config whose keys mirror long flag names; explicit flags win.
// The config is expanded into synthetic argv tokens placed before the real
// ones, so CLI11's take-last policy resolves conflicts toward the flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") config_path = args[i + 1];
    if (config_path.empty()) return args;
    std::ifstream in(config_path);
    if (!in) throw SchemaError("cannot open config '" + config_path + "'");
    json cfg = json::parse(in);
    if (!cfg.is_object()) throw SchemaError("config must be a flat JSON object");
    std::vector<std::string> out;
    if (!args.empty()) out.push_back(args[0]);  // subcommand first
    for (const auto& [k, v] : cfg.items()) {
        out.push_back("--" + k);
        out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
    for (std::size_t i = 1; i < args.size(); ++i) out.push_back(args[i]);
    return out;
}

AdjacencyGraph load_graph(const std::string& path, std::size_t n, bool dense, bool self_loops) {
    if (dense) return load_adjacency_dense(path, self_loops);
    return load_adjacency(path, n, self_loops);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"local-interference causal estimation toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Format fmt = Format::table;
    const std::map<std::string, Format> fmt_map{{"table", Format::table},
                                                {"json-lines", Format::jsonl},
                                                {"jsonl", Format::jsonl}};
    std::string config_dummy;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", fmt, "table or json-lines")
            ->transform(CLI::CheckedTransformer(fmt_map, CLI::ignore_case));
        cmd->add_option("--config", config_dummy, "flat JSON config; flags win on conflict");
    };

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
    std::string dgp = "basic", out_path, out2_path;
    std::size_t units = 11000, contexts = 1000;
    std::int64_t seed = -1;
    double noise_sd = 1.0, t_adjustment = 0.1;
    double ce_c = 2.0, ce_alpha = 1.0, ce_alpha2 = 0.5, ce_beta = 1.0;
    sim->add_option("--dgp", dgp)->check(CLI::IsMember({"basic", "tdep", "counterexample", "product"}));
    sim->add_option("--units", units);
    sim->add_option("--contexts", contexts);
    sim->add_option("--seed", seed, "required; no wall-clock default");
    sim->add_option("--noise-sd", noise_sd);
    sim->add_option("--t-adjustment", t_adjustment);
    sim->add_option("--out", out_path)->required();
    sim->add_option("--out2", out2_path, "second dataset (counterexample only)");
    sim->add_option("--c", ce_c);
    sim->add_option("--alpha", ce_alpha);
    sim->add_option("--alpha2", ce_alpha2);
    sim->add_option("--beta", ce_beta);
    add_common(sim);

    // ---- signature ----
    auto* sigcmd = app.add_subcommand("signature", "compute and attach a signature column");
    std::string sig_data, sig_kind = "context_fraction", sig_name = "i_sig", sig_out, sig_graph;
    bool sig_dense = false;
    double sig_floor = 1e-6, sig_tadj = 0.1;
    sigcmd->add_option("--data", sig_data)->required();
    sigcmd->add_option("--kind", sig_kind)
        ->check(CLI::IsMember({"context_fraction", "context_fraction_t_adjusted",
                               "adjacency_average", "inverse_square_distance"}));
    sigcmd->add_option("--name", sig_name);
    sigcmd->add_option("--graph", sig_graph, "edge list (or dense matrix with --dense)");
    sigcmd->add_flag("--dense", sig_dense);
    sigcmd->add_option("--floor", sig_floor);
    sigcmd->add_option("--t-adjustment", sig_tadj);
    sigcmd->add_option("--out", sig_out)->required();
    add_common(sigcmd);

    // ---- inject ----
    auto* inj = app.add_subcommand("inject", "add synthetic additive interference to outcomes");
    std::string inj_data, inj_sig, inj_scale, inj_out;
    double inj_strength = 1.0;
    inj->add_option("--data", inj_data)->required();
    inj->add_option("--signature-col", inj_sig)->required();
    inj->add_option("--scale-col", inj_scale)->required();
    inj->add_option("--strength", inj_strength);
    inj->add_option("--out", inj_out)->required();
    add_common(inj);

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "run an estimator, optionally with a bootstrap");
    std::string est_data, estimand = "tace", adjust = "x+i", propensity = "cell";
    std::string x_cols_arg, i_cols_arg, cluster_col;
    int bins = 10, replicates = 0, threads = 1;
    double ridge = 1e-6, clip = 0.01;
    bool do_trim = false;
    std::int64_t est_seed = -1;
    est->add_option("--data", est_data)->required();
    est->add_option("--estimand", estimand)->check(CLI::IsMember({"tace", "tacrr", "naive"}));
    est->add_option("--adjust", adjust)->check(CLI::IsMember({"none", "x", "x+i"}));
    est->add_option("--propensity", propensity)->check(CLI::IsMember({"cell", "logistic"}));
    est->add_option("--x-cols", x_cols_arg, "comma list; default: covariates named x_*");
    est->add_option("--i-cols", i_cols_arg, "comma list; default: all signature columns");
    est->add_option("--bins", bins);
    est->add_option("--ridge", ridge);
    est->add_option("--clip", clip);
    est->add_flag("--trim", do_trim);
    est->add_option("--replicates", replicates, "bootstrap replicates; 0 disables");
    est->add_option("--seed", est_seed);
    est->add_option("--cluster-col", cluster_col);
    est->add_option("--threads", threads);
    add_common(est);

    // ---- inflate ----
    auto* inf = app.add_subcommand("inflate", "dependence summary and interval inflation");
    std::string inf_graph, inf_method = "sr", inf_interval;
    std::size_t inf_n = 0;
    bool inf_dense = false;
    inf->add_option("--graph", inf_graph)->required();
    inf->add_option("--n", inf_n, "node count (edge-list mode)");
    inf->add_flag("--dense", inf_dense);
    inf->add_option("--method", inf_method)->check(CLI::IsMember({"avg", "max", "sr"}));
    inf->add_option("--interval", inf_interval,
                    "JSON file with point/lo/hi (e.g. estimate --format json-lines output)");
    add_common(inf);

    // ---- toy ----
    auto* toy = app.add_subcommand("toy", "three-unit linear interference demonstrators");
    int toy_example = 1;
    ToyModelParams toy_params;
    toy->add_option("--example", toy_example)->check(CLI::IsMember({1, 2}));
    toy->add_option("--alpha", toy_params.alpha);
    toy->add_option("--beta", toy_params.beta);
    toy->add_option("--gamma", toy_params.gamma);
    toy->add_option("--rho", toy_params.rho);
    toy->add_option("--delta", toy_params.delta);
    toy->add_option("--t1", toy_params.t1);
    toy->add_option("--t2", toy_params.t2);
    toy->add_option("--t3", toy_params.t3);
    add_common(toy);

    // Expand --config into synthetic leading tokens, then parse.
    std::vector<std::string> raw(argv + 1, argv + argc);
    const auto expanded = expand_config(raw);
    std::vector<const char*> cargs{argv[0]};
    for (const auto& s : expanded) cargs.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (sim->parsed()) {
        if (seed < 0) throw ValidationError("simulate requires --seed");
        if (dgp == "counterexample") {
            if (out2_path.empty())
                throw ValidationError("counterexample needs --out2 for the second dataset");
            const auto pair = gen_counterexample_pair(units, static_cast<std::uint64_t>(seed),
                                                      ce_c, ce_alpha, ce_alpha2, ce_beta);
            save_dataset(pair.model1, out_path);
            save_dataset(pair.model2, out2_path);
            emit(json{{"dgp", dgp}, {"n", units}, {"tace1", pair.tace1}, {"tace2", pair.tace2},
                      {"out", out_path}, {"out2", out2_path}}, fmt);
            return 0;
        }
        DgpConfig cfg{units, contexts, static_cast<std::uint64_t>(seed), noise_sd, t_adjustment,
                      DgpKind::basic};
        GeneratedData gen = dgp == "basic"   ? gen_basic(cfg)
                            : dgp == "tdep"  ? gen_t_dependent(cfg)
                                             : gen_product(cfg);
        save_dataset(gen.dataset, out_path);
        emit(json{{"dgp", dgp}, {"n", gen.dataset.size()}, {"contexts", contexts},
                  {"ground_truth", gen.ground_truth}, {"out", out_path}}, fmt);
        return 0;
    }

    if (sigcmd->parsed()) {
        const auto ds = load_dataset(sig_data);
        SignatureSpec spec;
        spec.t_adjustment = sig_tadj;
        spec.distance_floor = sig_floor;
        std::optional<AdjacencyGraph> graph;
        if (sig_kind == "context_fraction") spec.kind = SignatureKind::context_fraction;
        else if (sig_kind == "context_fraction_t_adjusted")
            spec.kind = SignatureKind::context_fraction_t_adjusted;
        else if (sig_kind == "adjacency_average") {
            spec.kind = SignatureKind::adjacency_average;
            if (sig_graph.empty()) throw ValidationError("adjacency_average requires --graph");
            graph = load_graph(sig_graph, ds.size(), sig_dense, false);
        } else {
            spec.kind = SignatureKind::inverse_square_distance;
        }
        const auto out = attach_signature(ds, spec, sig_name, graph ? &*graph : nullptr);
        save_dataset(out, sig_out);
        emit(json{{"kind", sig_kind}, {"name", sig_name}, {"n", out.size()}, {"out", sig_out}},
             fmt);
        return 0;
    }

    if (inj->parsed()) {
        const auto ds = load_dataset(inj_data);
        const auto out = inject_interference(ds, inj_sig, inj_scale, inj_strength);
        save_dataset(out, inj_out);
        emit(json{{"signature_col", inj_sig}, {"scale_col", inj_scale},
                  {"strength", inj_strength}, {"out", inj_out}}, fmt);
        return 0;
    }

    if (est->parsed()) {
        const auto ds = load_dataset(est_data);
        EstimatorSpec spec;
        spec.estimand = estimand == "tace"    ? Estimand::tace
                        : estimand == "tacrr" ? Estimand::tacrr
                                              : Estimand::naive_diff;
        spec.propensity = propensity == "cell" ? PropensityKind::cell : PropensityKind::logistic;
        spec.bins = bins;
        spec.ridge = ridge;
        spec.clip = clip;
        spec.trim = do_trim;
        if (adjust != "none") {
            if (!x_cols_arg.empty()) spec.x_cols = split_list(x_cols_arg);
            else
                for (const auto& c : ds.covariate_names())
                    if (c.rfind("x_", 0) == 0) spec.x_cols.push_back(c);
        }
        if (adjust == "x+i") {
            spec.i_cols = i_cols_arg.empty() ? ds.signature_names() : split_list(i_cols_arg);
        }
        const auto rep = run_estimator(ds, spec);
        emit(report_json(rep), fmt);
        if (replicates > 0) {
            if (est_seed < 0)
                throw ValidationError("bootstrap requires --seed (no wall-clock default)");
            BootstrapConfig bcfg;
            bcfg.replicates = replicates;
            bcfg.seed = static_cast<std::uint64_t>(est_seed);
            if (!cluster_col.empty()) bcfg.cluster_col = cluster_col;
            bcfg.threads = threads;
            emit(interval_json(bootstrap(ds, spec, bcfg)), fmt);
        }
        return 0;
    }

    if (inf->parsed()) {
        if (!inf_dense && inf_n == 0)
            throw ValidationError("edge-list mode requires --n");
        const auto g = load_graph(inf_graph, inf_n, inf_dense, true);
        const auto summary = dependence_summary(g);
        emit(summary_json(summary), fmt);
        if (!inf_interval.empty()) {
            std::ifstream in(inf_interval);
            if (!in) throw SchemaError("cannot open interval file '" + inf_interval + "'");
            json j = json::parse(in);
            IntervalReport r;
            r.point = j.at("point").get<double>();
            r.lo = r.lo_inflated = j.at("lo").get<double>();
            r.hi = r.hi_inflated = j.at("hi").get<double>();
            if (j.contains("replicates")) r.replicates = j["replicates"].get<int>();
            if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
            const auto method = inf_method == "avg"   ? InflationMethod::avg
                                : inf_method == "max" ? InflationMethod::max
                                                      : InflationMethod::sr;
            emit(interval_json(inflate(r, summary, method)), fmt);
        }
        return 0;
    }

    if (toy->parsed()) {
        const auto r = toy_linear(toy_example, toy_params);
        emit(json{{"example", toy_example}, {"y1", r.y1}, {"y2", r.y2}, {"y3", r.y3},
                  {"recovered_alpha", r.recovered_alpha}, {"bias", r.bias}}, fmt);
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const OverlapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EstimationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
