#include "localint/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace localint {

Dataset::Dataset(std::vector<UnitRecord> records, std::vector<std::string> covariate_names,
                 std::vector<std::string> signature_names)
    : records_(std::move(records)),
      covariate_names_(std::move(covariate_names)),
      signature_names_(std::move(signature_names)) {
    validate();
}

void Dataset::validate() const {
    if (records_.empty()) throw ValidationError("dataset is empty");
    std::unordered_set<std::int64_t> seen_ids;
    seen_ids.reserve(records_.size());
    for (std::size_t row = 0; row < records_.size(); ++row) {
        const auto& r = records_[row];
        const std::string where = "row " + std::to_string(row);
        if (r.t != 0 && r.t != 1)
            throw ValidationError(where + ", column t: value " + std::to_string(r.t) +
                                  " is not binary");
        if (!std::isfinite(r.y)) throw ValidationError(where + ", column y: non-finite value");
        if (r.x.size() != covariate_names_.size())
            throw ValidationError(where + ": expected " + std::to_string(covariate_names_.size()) +
                                  " covariates, got " + std::to_string(r.x.size()));
        if (r.sig.size() != signature_names_.size())
            throw ValidationError(where + ": expected " + std::to_string(signature_names_.size()) +
                                  " signatures, got " + std::to_string(r.sig.size()));
        for (std::size_t k = 0; k < r.x.size(); ++k)
            if (!std::isfinite(r.x[k]))
                throw ValidationError(where + ", column " + covariate_names_[k] +
                                      ": non-finite value");
        for (std::size_t k = 0; k < r.sig.size(); ++k)
            if (!std::isfinite(r.sig[k]))
                throw ValidationError(where + ", column " + signature_names_[k] +
                                      ": non-finite value");
        if (r.coord && (!std::isfinite(r.coord->first) || !std::isfinite(r.coord->second)))
            throw ValidationError(where + ": non-finite coordinate");
        if (!seen_ids.insert(r.unit_id).second)
            throw ValidationError(where + ", column unit_id: duplicate id " +
                                  std::to_string(r.unit_id));
    }
}

bool Dataset::has_covariate(const std::string& name) const {
    return std::find(covariate_names_.begin(), covariate_names_.end(), name) !=
           covariate_names_.end();
}

bool Dataset::has_signature(const std::string& name) const {
    return std::find(signature_names_.begin(), signature_names_.end(), name) !=
           signature_names_.end();
}

double Dataset::value(std::size_t row, const std::string& column) const {
    const auto& r = records_[row];
    if (column == "y") return r.y;
    if (column == "t") return static_cast<double>(r.t);
    auto it = std::find(covariate_names_.begin(), covariate_names_.end(), column);
    if (it != covariate_names_.end()) return r.x[it - covariate_names_.begin()];
    it = std::find(signature_names_.begin(), signature_names_.end(), column);
    if (it != signature_names_.end()) return r.sig[it - signature_names_.begin()];
    throw SchemaError("unknown column '" + column + "'");
}

std::vector<double> Dataset::column(const std::string& name) const {
    std::vector<double> out(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) out[i] = value(i, name);
    return out;
}

Dataset Dataset::with_signature(const std::string& name, const std::vector<double>& values) const {
    if (has_signature(name))
        throw ValidationError("signature column '" + name + "' already exists");
    if (values.size() != records_.size())
        throw ValidationError("signature length does not match dataset size");
    auto records = records_;
    for (std::size_t i = 0; i < records.size(); ++i) records[i].sig.push_back(values[i]);
    auto names = signature_names_;
    names.push_back(name);
    return Dataset(std::move(records), covariate_names_, std::move(names));
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    std::vector<UnitRecord> records;
    records.reserve(rows.size());
    for (std::size_t r : rows) records.push_back(records_[r]);
    return Dataset(std::move(records), covariate_names_, signature_names_);
}

Dataset Dataset::with_outcomes(const std::vector<double>& y) const {
    if (y.size() != records_.size())
        throw ValidationError("outcome length does not match dataset size");
    auto records = records_;
    for (std::size_t i = 0; i < records.size(); ++i) records[i].y = y[i];
    return Dataset(std::move(records), covariate_names_, signature_names_);
}

bool Dataset::all_have_context() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const UnitRecord& r) { return r.context.has_value(); });
}

bool Dataset::all_have_coord() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const UnitRecord& r) { return r.coord.has_value(); });
}

std::vector<std::vector<double>> pairwise_distances(const Dataset& dataset) {
    if (!dataset.all_have_coord())
        throw ValidationError("pairwise_distances requires coordinates on every record");
    const std::size_t n = dataset.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = *dataset.record(i).coord;
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& b = *dataset.record(j).coord;
            const double dx = a.first - b.first;
            const double dy = a.second - b.second;
            d[i][j] = d[j][i] = std::sqrt(dx * dx + dy * dy);
        }
    }
    return d;
}

}  // namespace localint
