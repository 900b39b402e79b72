#include "localint/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "localint/rng.hpp"

namespace localint {
namespace {

// Type-7 interpolated percentile of a sorted sample.
double percentile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw EstimationError("no replicates to take percentiles of");
    if (sorted.size() == 1) return sorted[0];
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string to_string(InflationMethod m) {
    switch (m) {
        case InflationMethod::avg: return "avg";
        case InflationMethod::max: return "max";
        case InflationMethod::sr: return "sr";
    }
    return "?";
}

std::vector<std::vector<int>> dependence_matrix(const AdjacencyGraph& graph) {
    if (!graph.self_loops())
        throw ValidationError("dependence matrix requires the self-loop convention (A_ii = 1)");
    const std::size_t n = graph.n();
    std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
    for (const auto& [u, v] : graph.edges()) a[u][v] = a[v][u] = 1;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            int hit = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (a[k][i] == 1 && a[k][j] == 1) {
                    hit = 1;
                    break;
                }
            }
            d[i][j] = d[j][i] = hit;
        }
    }
    return d;
}

DependenceSummary dependence_summary(const AdjacencyGraph& graph) {
    const auto d = dependence_matrix(graph);
    const std::size_t n = d.size();
    DependenceSummary s;
    s.d_per_unit.resize(n, 0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t row = 0;
        for (std::size_t j = 0; j < n; ++j) row += static_cast<std::size_t>(d[i][j]);
        s.d_per_unit[i] = row;
        s.d_max = std::max(s.d_max, row);
        total += static_cast<double>(row);
    }
    s.d_avg = total / static_cast<double>(n);

    // Power iteration from the all-ones vector; D is symmetric nonnegative
    // so the Rayleigh quotient converges to the spectral radius.
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double lambda = 0.0;
    bool converged = false;
    const int max_iter = 10000;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double s_i = 0.0;
            for (std::size_t j = 0; j < n; ++j) s_i += d[i][j] * v[j];
            w[i] = s_i;
        }
        double vw = 0.0, vv = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            vw += v[i] * w[i];
            vv += v[i] * v[i];
        }
        const double rayleigh = vw / vv;
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            lambda = 0.0;
            converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        if (iter > 0 && std::fabs(rayleigh - lambda) < 1e-10) {
            lambda = rayleigh;
            converged = true;
            break;
        }
        lambda = rayleigh;
    }
    if (!converged)
        throw EstimationError("power iteration did not converge after " +
                              std::to_string(max_iter) + " iterations");
    s.d_sr = lambda;
    return s;
}

IntervalReport bootstrap(const Dataset& dataset, const EstimatorSpec& spec,
                         const BootstrapConfig& config) {
    if (config.replicates < 100)
        throw ValidationError("bootstrap needs at least 100 replicates");

    IntervalReport rep;
    rep.replicates = config.replicates;
    rep.seed = config.seed;
    rep.point = run_estimator(dataset, spec).point;

    // Cluster layout, when requested.
    std::vector<std::vector<std::size_t>> clusters;
    if (config.cluster_col) {
        std::map<std::int64_t, std::vector<std::size_t>> by_label;
        if (*config.cluster_col == "context") {
            if (!dataset.all_have_context())
                throw ValidationError("cluster bootstrap over 'context' needs context labels");
            for (std::size_t i = 0; i < dataset.size(); ++i)
                by_label[*dataset.record(i).context].push_back(i);
        } else {
            for (std::size_t i = 0; i < dataset.size(); ++i)
                by_label[static_cast<std::int64_t>(
                             std::llround(dataset.value(i, *config.cluster_col) * 1e6))]
                    .push_back(i);
        }
        for (auto& [label, rows] : by_label) clusters.push_back(std::move(rows));
    }

    std::vector<double> replicate_points(config.replicates, 0.0);
    std::vector<char> replicate_ok(config.replicates, 0);
    std::vector<std::string> replicate_error(config.replicates);
    auto run_replicate = [&](int r) {
        Substream rng(config.seed, static_cast<std::uint64_t>(r), 0xB007);
        std::vector<std::size_t> rows;
        if (clusters.empty()) {
            rows.resize(dataset.size());
            for (auto& idx : rows) idx = rng.below(dataset.size());
        } else {
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                const auto& chosen = clusters[rng.below(clusters.size())];
                rows.insert(rows.end(), chosen.begin(), chosen.end());
            }
        }
        try {
            // Resampled rows duplicate unit ids; rebuild them for validity.
            std::vector<UnitRecord> recs;
            recs.reserve(rows.size());
            for (std::size_t k = 0; k < rows.size(); ++k) {
                auto rec = dataset.record(rows[k]);
                rec.unit_id = static_cast<std::int64_t>(k);
                recs.push_back(std::move(rec));
            }
            Dataset resampled(std::move(recs), dataset.covariate_names(),
                              dataset.signature_names());
            replicate_points[r] = run_estimator(resampled, spec).point;
            replicate_ok[r] = 1;
        } catch (const std::exception& e) {
            replicate_error[r] = e.what();
        }
    };
    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        for (int r = 0; r < config.replicates; ++r) run_replicate(r);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (int r = w; r < config.replicates; r += threads) run_replicate(r);
            });
        for (auto& t : pool) t.join();
    }
    std::vector<double> points;
    points.reserve(config.replicates);
    std::size_t failures = 0;
    std::string first_failure;
    for (int r = 0; r < config.replicates; ++r) {
        if (replicate_ok[r]) points.push_back(replicate_points[r]);
        else {
            ++failures;
            if (first_failure.empty()) first_failure = replicate_error[r];
        }
    }
    rep.failed_replicates = failures;
    if (static_cast<double>(failures) > 0.05 * static_cast<double>(config.replicates))
        throw EstimationError("bootstrap failed in " + std::to_string(failures) + "/" +
                              std::to_string(config.replicates) +
                              " replicates; first failure: " + first_failure);
    std::sort(points.begin(), points.end());
    rep.lo = rep.lo_inflated = percentile(points, 0.025);
    rep.hi = rep.hi_inflated = percentile(points, 0.975);
    return rep;
}

IntervalReport inflate(const IntervalReport& report, const DependenceSummary& summary,
                       InflationMethod method) {
    double factor = 0.0;
    switch (method) {
        case InflationMethod::avg: factor = summary.d_avg; break;
        case InflationMethod::max: factor = static_cast<double>(summary.d_max); break;
        case InflationMethod::sr: factor = summary.d_sr; break;
    }
    if (factor < 1.0)
        throw ValidationError("inflation factor " + std::to_string(factor) +
                              " < 1; graph is inconsistent with the self-loop convention");
    IntervalReport out = report;
    const double mid = 0.5 * (report.lo + report.hi);
    const double half = 0.5 * (report.hi - report.lo) * std::sqrt(factor);
    out.lo_inflated = mid - half;
    out.hi_inflated = mid + half;
    out.inflation_factor = factor;
    out.inflation_method = method;
    return out;
}

}  // namespace localint
