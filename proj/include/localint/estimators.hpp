#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "localint/dataset.hpp"
#include "localint/propensity.hpp"

namespace localint {

enum class Estimand { tace, tacrr, naive_diff };
enum class Adjustment { none, x_only, x_and_i };

std::string to_string(Estimand e);
std::string to_string(Adjustment a);

struct EstimateReport {
    Estimand estimand = Estimand::tace;
    double point = 0.0;
    std::size_t n_used = 0;
    double trimmed_fraction = 0.0;
    Adjustment adjustment = Adjustment::none;
    std::size_t n_strata = 0;
    std::size_t violating_strata = 0;
    std::size_t clipped_predictions = 0;
};

// Horvitz-Thompson IPW: mean of t*y/p - (1-t)*y/(1-p). The adjustment
// label follows the features the model was fit on.
EstimateReport ipw_tace(const Dataset& dataset, const PropensityModel& model);

// Stratified conditional-mean form over discretized (x, i) cells; every
// stratum must contain both arms.
EstimateReport stratified_tace(const Dataset& dataset, const std::vector<std::string>& x_cols,
                               const std::vector<std::string>& i_cols, int bins = 10);

// Unadjusted difference in arm means.
EstimateReport naive_difference(const Dataset& dataset);

// Stratified risk ratio: sum over cells of (n_c/n) * mean(y|t=1) / mean(y|t=0).
EstimateReport tacrr(const Dataset& dataset, const std::vector<std::string>& x_cols,
                     const std::vector<std::string>& i_cols, int bins = 10);

// One estimator run, fully configured; this is the unit the bootstrap and
// the CLI both re-execute.
struct EstimatorSpec {
    Estimand estimand = Estimand::tace;
    std::vector<std::string> x_cols;
    std::vector<std::string> i_cols;
    PropensityKind propensity = PropensityKind::cell;
    int bins = 10;
    double ridge = 1e-6;
    double clip = 0.01;
    bool trim = false;  // trim overlap-violating strata before estimating
};

EstimateReport run_estimator(const Dataset& dataset, const EstimatorSpec& spec);

}  // namespace localint
