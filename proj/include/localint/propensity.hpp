#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "localint/dataset.hpp"

namespace localint {

// Discretizer for one feature column. Columns with at most `bins` distinct
// values are kept verbatim (codes index the sorted distinct values);
// otherwise codes come from equal-frequency bins.
class ColumnBinner {
public:
    static ColumnBinner fit(const std::vector<double>& values, int bins);

    // Code for a value. Verbatim columns reject values never seen in
    // training (unseen stratum); binned columns clamp into the edge bins.
    int code(double v) const;
    bool verbatim() const { return verbatim_; }

private:
    bool verbatim_ = true;
    std::vector<double> levels_;  // sorted distinct values (verbatim)
    std::vector<double> edges_;   // interior quantile cut points (binned)
};

enum class PropensityKind { cell, logistic };

struct CellCounts {
    std::size_t n_treated = 0;
    std::size_t n_total = 0;
};

struct PropensityModel {
    PropensityKind kind = PropensityKind::cell;
    std::vector<std::string> x_cols;
    std::vector<std::string> i_cols;
    double clip = 0.01;  // epsilon; 0 disables clipping

    // cell kind
    std::vector<ColumnBinner> binners;  // one per feature, x_cols then i_cols
    std::map<std::vector<int>, CellCounts> cells;

    // logistic kind
    std::vector<double> coefficients;  // intercept first

    std::vector<std::string> feature_columns() const;
    // Stratum key of a row (cell kind only).
    std::vector<int> stratum_of(const Dataset& dataset, std::size_t row) const;
};

// Exact empirical frequencies P(T | discretized features). An empty
// feature selection yields the single marginal stratum (P(T) baseline).
PropensityModel fit_cell(const Dataset& dataset, const std::vector<std::string>& x_cols,
                         const std::vector<std::string>& i_cols, int bins = 10,
                         double clip = 0.01);

// Single-stratum marginal P(T) table, the no-adjustment IPW baseline.
PropensityModel fit_cell_marginal(const Dataset& dataset, double clip = 0.01);

// Ridge-penalized logistic MLE fitted by Newton iterations with
// step-halving; convergence when the max coefficient update < 1e-8.
PropensityModel fit_logistic(const Dataset& dataset, const std::vector<std::string>& x_cols,
                             const std::vector<std::string>& i_cols, double ridge = 1e-6,
                             double clip = 0.01);

// Probability in [clip, 1-clip] (in (0,1) unclipped when clip == 0).
double predict(const PropensityModel& model, const Dataset& dataset, std::size_t row);
// Same but without the clip, used where exact frequencies are needed.
double predict_unclipped(const PropensityModel& model, const Dataset& dataset, std::size_t row);

struct StratumInfo {
    std::vector<int> key;
    std::size_t n_treated = 0;
    std::size_t n_total = 0;
    bool violation = false;  // one-armed stratum
};

struct OverlapReport {
    std::vector<StratumInfo> strata;
    double trimmed_fraction = 0.0;
    std::vector<std::size_t> violating_rows;
};

// Per-stratum counts and one-armed flags. Logistic models are audited by
// binning their predictions into deciles.
OverlapReport overlap_report(const PropensityModel& model, const Dataset& dataset);

// Drops every unit in a violating stratum. Errors if nothing remains.
Dataset trim(const Dataset& dataset, const OverlapReport& report);

}  // namespace localint
