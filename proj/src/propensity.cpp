#include "localint/propensity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "localint/error.hpp"

namespace localint {
namespace {

std::string key_to_string(const std::vector<int>& key) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < key.size(); ++i) os << (i ? "," : "") << key[i];
    os << ")";
    return os.str();
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Solves a small symmetric positive-definite system in place.
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::fabs(a[col][col]) < 1e-300)
            throw EstimationError("singular Hessian in logistic fit");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

std::vector<int> decile_codes(const std::vector<double>& predictions) {
    auto sorted = predictions;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> edges;
    for (int j = 1; j < 10; ++j) edges.push_back(sorted[j * n / 10]);
    std::vector<int> codes(n);
    for (std::size_t i = 0; i < n; ++i)
        codes[i] = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), predictions[i]) -
                                    edges.begin());
    return codes;
}

}  // namespace

ColumnBinner ColumnBinner::fit(const std::vector<double>& values, int bins) {
    if (bins < 1) throw ValidationError("bins must be >= 1");
    ColumnBinner b;
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct;
    for (double v : sorted)
        if (distinct.empty() || v != distinct.back()) distinct.push_back(v);
    if (distinct.size() <= static_cast<std::size_t>(bins)) {
        b.verbatim_ = true;
        b.levels_ = std::move(distinct);
    } else {
        b.verbatim_ = false;
        const std::size_t n = sorted.size();
        for (int j = 1; j < bins; ++j) {
            const double edge = sorted[static_cast<std::size_t>(j) * n / bins];
            if (b.edges_.empty() || edge > b.edges_.back()) b.edges_.push_back(edge);
        }
    }
    return b;
}

int ColumnBinner::code(double v) const {
    if (verbatim_) {
        const auto it = std::lower_bound(levels_.begin(), levels_.end(), v);
        if (it == levels_.end() || *it != v)
            throw EstimationError("unseen stratum: value " + std::to_string(v) +
                                  " was not observed when the model was fit");
        return static_cast<int>(it - levels_.begin());
    }
    return static_cast<int>(std::upper_bound(edges_.begin(), edges_.end(), v) - edges_.begin());
}

std::vector<std::string> PropensityModel::feature_columns() const {
    std::vector<std::string> cols = x_cols;
    cols.insert(cols.end(), i_cols.begin(), i_cols.end());
    return cols;
}

std::vector<int> PropensityModel::stratum_of(const Dataset& dataset, std::size_t row) const {
    const auto cols = feature_columns();
    std::vector<int> key(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
        key[k] = binners[k].code(dataset.value(row, cols[k]));
    return key;
}

static PropensityModel fit_cell_impl(const Dataset& dataset, const std::vector<std::string>& x_cols,
                                     const std::vector<std::string>& i_cols, int bins,
                                     double clip) {
    PropensityModel m;
    m.kind = PropensityKind::cell;
    m.x_cols = x_cols;
    m.i_cols = i_cols;
    m.clip = clip;
    for (const auto& col : m.feature_columns()) m.binners.push_back(ColumnBinner::fit(dataset.column(col), bins));
    for (std::size_t row = 0; row < dataset.size(); ++row) {
        auto& cell = m.cells[m.stratum_of(dataset, row)];
        cell.n_treated += static_cast<std::size_t>(dataset.record(row).t);
        cell.n_total += 1;
    }
    return m;
}

PropensityModel fit_cell(const Dataset& dataset, const std::vector<std::string>& x_cols,
                         const std::vector<std::string>& i_cols, int bins, double clip) {
    if (x_cols.empty() && i_cols.empty())
        throw SchemaError("fit_cell requires at least one feature column");
    if (clip < 0 || clip >= 0.5) throw ValidationError("clip must lie in [0, 0.5)");
    return fit_cell_impl(dataset, x_cols, i_cols, bins, clip);
}

PropensityModel fit_cell_marginal(const Dataset& dataset, double clip) {
    return fit_cell_impl(dataset, {}, {}, 1, clip);
}

PropensityModel fit_logistic(const Dataset& dataset, const std::vector<std::string>& x_cols,
                             const std::vector<std::string>& i_cols, double ridge, double clip) {
    if (x_cols.empty() && i_cols.empty())
        throw SchemaError("fit_logistic requires at least one feature column");
    if (ridge < 0) throw ValidationError("ridge must be >= 0");
    if (clip < 0 || clip >= 0.5) throw ValidationError("clip must lie in [0, 0.5)");
    PropensityModel m;
    m.kind = PropensityKind::logistic;
    m.x_cols = x_cols;
    m.i_cols = i_cols;
    m.clip = clip;

    const auto cols = m.feature_columns();
    const std::size_t n = dataset.size();
    const std::size_t p = cols.size() + 1;  // intercept first
    std::vector<std::vector<double>> feat(n, std::vector<double>(p, 1.0));
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) feat[i][k + 1] = dataset.value(i, cols[k]);
        t[i] = dataset.record(i).t;
    }

    auto penalized_loglik = [&](const std::vector<double>& beta) {
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = 0.0;
            for (std::size_t k = 0; k < p; ++k) z += beta[k] * feat[i][k];
            // log-likelihood term: t*z - log(1+exp(z)), numerically stable
            ll += t[i] * z - (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)));
        }
        for (std::size_t k = 1; k < p; ++k) ll -= 0.5 * ridge * beta[k] * beta[k];
        return ll;
    };

    std::vector<double> beta(p, 0.0);
    double ll = penalized_loglik(beta);
    const int max_iter = 100;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<double> grad(p, 0.0);
        std::vector<std::vector<double>> hess(p, std::vector<double>(p, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            double z = 0.0;
            for (std::size_t k = 0; k < p; ++k) z += beta[k] * feat[i][k];
            const double pi = sigmoid(z);
            const double w = pi * (1.0 - pi);
            const double resid = t[i] - pi;
            for (std::size_t k = 0; k < p; ++k) {
                grad[k] += resid * feat[i][k];
                for (std::size_t l = k; l < p; ++l) hess[k][l] += w * feat[i][k] * feat[i][l];
            }
        }
        for (std::size_t k = 1; k < p; ++k) {
            grad[k] -= ridge * beta[k];
            hess[k][k] += ridge;
        }
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < k; ++l) hess[k][l] = hess[l][k];

        auto delta = solve_linear(hess, grad);
        double step = 1.0;
        std::vector<double> candidate(p);
        double new_ll = -1e300;
        for (int h = 0; h < 40; ++h) {
            for (std::size_t k = 0; k < p; ++k) candidate[k] = beta[k] + step * delta[k];
            new_ll = penalized_loglik(candidate);
            if (new_ll >= ll) break;
            step *= 0.5;
        }
        double max_update = 0.0;
        for (std::size_t k = 0; k < p; ++k)
            max_update = std::max(max_update, std::fabs(step * delta[k]));
        beta = candidate;
        ll = new_ll;
        if (max_update < 1e-8) {
            for (double b : beta)
                if (!std::isfinite(b)) throw EstimationError("logistic fit produced non-finite coefficients");
            m.coefficients = beta;
            return m;
        }
    }
    throw EstimationError(
        "logistic fit did not converge in 100 Newton iterations; the data may be separable "
        "-- try a larger ridge penalty");
}

double predict_unclipped(const PropensityModel& model, const Dataset& dataset, std::size_t row) {
    if (model.kind == PropensityKind::cell) {
        const auto key = model.stratum_of(dataset, row);
        const auto it = model.cells.find(key);
        if (it == model.cells.end())
            throw EstimationError("unseen stratum " + key_to_string(key) +
                                  ": not present in the fitted cell table");
        return static_cast<double>(it->second.n_treated) /
               static_cast<double>(it->second.n_total);
    }
    const auto cols = model.feature_columns();
    double z = model.coefficients[0];
    for (std::size_t k = 0; k < cols.size(); ++k)
        z += model.coefficients[k + 1] * dataset.value(row, cols[k]);
    return sigmoid(z);
}

double predict(const PropensityModel& model, const Dataset& dataset, std::size_t row) {
    const double p = predict_unclipped(model, dataset, row);
    if (model.clip <= 0.0) return p;
    return std::clamp(p, model.clip, 1.0 - model.clip);
}

OverlapReport overlap_report(const PropensityModel& model, const Dataset& dataset) {
    OverlapReport rep;
    std::map<std::vector<int>, StratumInfo> strata;
    std::vector<std::vector<int>> row_keys(dataset.size());
    if (model.kind == PropensityKind::cell) {
        for (std::size_t row = 0; row < dataset.size(); ++row)
            row_keys[row] = model.stratum_of(dataset, row);
    } else {
        // Audit a smooth model through deciles of its predictions.
        std::vector<double> preds(dataset.size());
        for (std::size_t row = 0; row < dataset.size(); ++row)
            preds[row] = predict_unclipped(model, dataset, row);
        const auto codes = decile_codes(preds);
        for (std::size_t row = 0; row < dataset.size(); ++row) row_keys[row] = {codes[row]};
    }
    for (std::size_t row = 0; row < dataset.size(); ++row) {
        auto& s = strata[row_keys[row]];
        s.key = row_keys[row];
        s.n_treated += static_cast<std::size_t>(dataset.record(row).t);
        s.n_total += 1;
    }
    std::size_t violating_units = 0;
    for (auto& [key, s] : strata) {
        s.violation = (s.n_treated == 0 || s.n_treated == s.n_total);
        if (s.violation) violating_units += s.n_total;
        rep.strata.push_back(s);
    }
    for (std::size_t row = 0; row < dataset.size(); ++row)
        if (strata[row_keys[row]].violation) rep.violating_rows.push_back(row);
    rep.trimmed_fraction = static_cast<double>(violating_units) / static_cast<double>(dataset.size());
    return rep;
}

Dataset trim(const Dataset& dataset, const OverlapReport& report) {
    if (report.violating_rows.empty()) return dataset;
    if (report.violating_rows.size() >= dataset.size())
        throw EstimationError("trimming would remove every unit");
    std::vector<bool> drop(dataset.size(), false);
    for (std::size_t r : report.violating_rows) {
        if (r >= dataset.size())
            throw ValidationError("overlap report does not match this dataset");
        drop[r] = true;
    }
    std::vector<std::size_t> keep;
    keep.reserve(dataset.size() - report.violating_rows.size());
    for (std::size_t r = 0; r < dataset.size(); ++r)
        if (!drop[r]) keep.push_back(r);
    return dataset.subset(keep);
}

}  // namespace localint
