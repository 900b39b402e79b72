#include "localint/estimators.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "localint/error.hpp"

namespace localint {
namespace {

// Kahan compensated accumulator so reductions are deterministic to ~1e-12
// regardless of evaluation order tweaks.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

std::string key_to_string(const std::vector<int>& key) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < key.size(); ++i) os << (i ? "," : "") << key[i];
    os << ")";
    return os.str();
}

Adjustment adjustment_of(const std::vector<std::string>& x_cols,
                         const std::vector<std::string>& i_cols) {
    if (x_cols.empty() && i_cols.empty()) return Adjustment::none;
    if (i_cols.empty()) return Adjustment::x_only;
    return Adjustment::x_and_i;
}

struct StratumAccum {
    std::size_t n1 = 0, n0 = 0;
    Kahan y1, y0;
};

std::map<std::vector<int>, StratumAccum> group_strata(const Dataset& dataset,
                                                      const PropensityModel& strata_model) {
    std::map<std::vector<int>, StratumAccum> groups;
    for (std::size_t row = 0; row < dataset.size(); ++row) {
        auto& g = groups[strata_model.stratum_of(dataset, row)];
        const auto& r = dataset.record(row);
        if (r.t == 1) {
            g.n1 += 1;
            g.y1.add(r.y);
        } else {
            g.n0 += 1;
            g.y0.add(r.y);
        }
    }
    return groups;
}

}  // namespace

std::string to_string(Estimand e) {
    switch (e) {
        case Estimand::tace: return "tace";
        case Estimand::tacrr: return "tacrr";
        case Estimand::naive_diff: return "naive_diff";
    }
    return "?";
}

std::string to_string(Adjustment a) {
    switch (a) {
        case Adjustment::none: return "none";
        case Adjustment::x_only: return "x_only";
        case Adjustment::x_and_i: return "x_and_i";
    }
    return "?";
}

EstimateReport ipw_tace(const Dataset& dataset, const PropensityModel& model) {
    EstimateReport rep;
    rep.estimand = Estimand::tace;
    rep.adjustment = adjustment_of(model.x_cols, model.i_cols);
    rep.n_used = dataset.size();
    Kahan acc;
    for (std::size_t row = 0; row < dataset.size(); ++row) {
        const double raw = predict_unclipped(model, dataset, row);
        double p = raw;
        if (model.clip > 0.0) {
            p = std::clamp(raw, model.clip, 1.0 - model.clip);
            if (p != raw) rep.clipped_predictions += 1;
        } else if (raw <= 0.0 || raw >= 1.0) {
            throw OverlapError("propensity " + std::to_string(raw) +
                               " outside (0,1) with clipping disabled");
        }
        const auto& r = dataset.record(row);
        acc.add(r.t == 1 ? r.y / p : -r.y / (1.0 - p));
    }
    rep.point = acc.sum / static_cast<double>(dataset.size());
    if (model.kind == PropensityKind::cell) rep.n_strata = model.cells.size();
    if (!std::isfinite(rep.point)) throw EstimationError("IPW estimate is non-finite");
    return rep;
}

EstimateReport stratified_tace(const Dataset& dataset, const std::vector<std::string>& x_cols,
                               const std::vector<std::string>& i_cols, int bins) {
    if (x_cols.empty() && i_cols.empty())
        throw SchemaError("stratified_tace requires at least one stratification column");
    const auto model = fit_cell(dataset, x_cols, i_cols, bins, 0.0);
    const auto groups = group_strata(dataset, model);
    Kahan acc;
    for (const auto& [key, g] : groups) {
        if (g.n1 == 0 || g.n0 == 0)
            throw OverlapError("stratum " + key_to_string(key) +
                               " is one-armed; trim before estimating");
        const double nc = static_cast<double>(g.n1 + g.n0);
        acc.add(nc / static_cast<double>(dataset.size()) *
                (g.y1.sum / static_cast<double>(g.n1) - g.y0.sum / static_cast<double>(g.n0)));
    }
    EstimateReport rep;
    rep.estimand = Estimand::tace;
    rep.adjustment = adjustment_of(x_cols, i_cols);
    rep.point = acc.sum;
    rep.n_used = dataset.size();
    rep.n_strata = groups.size();
    return rep;
}

EstimateReport naive_difference(const Dataset& dataset) {
    Kahan y1, y0;
    std::size_t n1 = 0, n0 = 0;
    for (const auto& r : dataset.records()) {
        if (r.t == 1) {
            y1.add(r.y);
            ++n1;
        } else {
            y0.add(r.y);
            ++n0;
        }
    }
    if (n1 == 0 || n0 == 0)
        throw EstimationError("naive difference needs both treated and untreated units");
    EstimateReport rep;
    rep.estimand = Estimand::naive_diff;
    rep.adjustment = Adjustment::none;
    rep.point = y1.sum / static_cast<double>(n1) - y0.sum / static_cast<double>(n0);
    rep.n_used = dataset.size();
    return rep;
}

EstimateReport tacrr(const Dataset& dataset, const std::vector<std::string>& x_cols,
                     const std::vector<std::string>& i_cols, int bins) {
    if (x_cols.empty() && i_cols.empty())
        throw SchemaError("tacrr requires at least one stratification column");
    const auto model = fit_cell(dataset, x_cols, i_cols, bins, 0.0);
    const auto groups = group_strata(dataset, model);
    Kahan acc;
    for (const auto& [key, g] : groups) {
        if (g.n1 == 0 || g.n0 == 0)
            throw OverlapError("stratum " + key_to_string(key) +
                               " is one-armed; trim before estimating");
        const double mean0 = g.y0.sum / static_cast<double>(g.n0);
        if (mean0 == 0.0)
            throw EstimationError("stratum " + key_to_string(key) +
                                  " has zero untreated mean outcome; ratio undefined");
        const double mean1 = g.y1.sum / static_cast<double>(g.n1);
        acc.add(static_cast<double>(g.n1 + g.n0) / static_cast<double>(dataset.size()) *
                (mean1 / mean0));
    }
    EstimateReport rep;
    rep.estimand = Estimand::tacrr;
    rep.adjustment = adjustment_of(x_cols, i_cols);
    rep.point = acc.sum;
    rep.n_used = dataset.size();
    rep.n_strata = groups.size();
    return rep;
}

EstimateReport run_estimator(const Dataset& dataset, const EstimatorSpec& spec) {
    if (spec.estimand == Estimand::naive_diff) return naive_difference(dataset);
    if (spec.estimand == Estimand::tacrr) {
        Dataset working = dataset;
        double trimmed = 0.0;
        if (spec.trim) {
            const auto model = fit_cell(dataset, spec.x_cols, spec.i_cols, spec.bins, spec.clip);
            const auto report = overlap_report(model, dataset);
            working = trim(dataset, report);
            trimmed = report.trimmed_fraction;
        }
        auto rep = tacrr(working, spec.x_cols, spec.i_cols, spec.bins);
        rep.trimmed_fraction = trimmed;
        return rep;
    }

    // TACE via IPW with the configured propensity model.
    PropensityModel model;
    Dataset working = dataset;
    double trimmed = 0.0;
    const bool unadjusted = spec.x_cols.empty() && spec.i_cols.empty();
    auto fit = [&](const Dataset& d) {
        if (unadjusted) return fit_cell_marginal(d, spec.clip);
        if (spec.propensity == PropensityKind::cell)
            return fit_cell(d, spec.x_cols, spec.i_cols, spec.bins, spec.clip);
        return fit_logistic(d, spec.x_cols, spec.i_cols, spec.ridge, spec.clip);
    };
    model = fit(dataset);
    if (spec.trim) {
        const auto report = overlap_report(model, dataset);
        if (!report.violating_rows.empty()) {
            working = trim(dataset, report);
            trimmed = report.trimmed_fraction;
            model = fit(working);  // refit on the kept sub-population
        }
    }
    auto rep = ipw_tace(working, model);
    rep.trimmed_fraction = trimmed;
    return rep;
}

}  // namespace localint
