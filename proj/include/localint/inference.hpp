#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "localint/dataset.hpp"
#include "localint/estimators.hpp"
#include "localint/graph.hpp"

namespace localint {

struct DependenceSummary {
    std::vector<std::size_t> d_per_unit;
    double d_avg = 0.0;
    std::size_t d_max = 0;
    double d_sr = 0.0;  // spectral radius of the dependence matrix
};

// D_ij = 1 iff some k has A_ki = A_kj = 1. Requires the self-loop
// convention (A_ii = 1).
std::vector<std::vector<int>> dependence_matrix(const AdjacencyGraph& graph);

// Row sums, their average and max, and the spectral radius via power
// iteration (Rayleigh-quotient tolerance 1e-10, at most 1e4 iterations).
DependenceSummary dependence_summary(const AdjacencyGraph& graph);

enum class InflationMethod { avg, max, sr };
std::string to_string(InflationMethod m);

struct IntervalReport {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double lo_inflated = 0.0;
    double hi_inflated = 0.0;
    double inflation_factor = 1.0;
    std::optional<InflationMethod> inflation_method;
    int replicates = 0;
    std::uint64_t seed = 0;
    std::size_t failed_replicates = 0;
};

struct BootstrapConfig {
    int replicates = 1000;
    std::uint64_t seed = 0;
    // When set, resample over distinct values of this column (or "context"
    // for the context label), keeping each drawn cluster whole.
    std::optional<std::string> cluster_col;
    // Replicates are independent given their substreams; results are
    // identical for any thread count.
    int threads = 1;
};

// Percentile bootstrap (2.5% / 97.5%). Replicate r draws its resampling
// indices from Substream(seed, r), so runs are reproducible and replicates
// independent. Replicates whose estimator throws are dropped; more than 5%
// failures aborts with the first failure message.
IntervalReport bootstrap(const Dataset& dataset, const EstimatorSpec& spec,
                         const BootstrapConfig& config);

// Widens [lo, hi] about its midpoint by sqrt(factor), factor taken from
// the summary per `method`.
IntervalReport inflate(const IntervalReport& report, const DependenceSummary& summary,
                       InflationMethod method);

}  // namespace localint
