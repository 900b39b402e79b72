#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "localint/error.hpp"

namespace localint {

struct UnitRecord {
    std::int64_t unit_id = 0;
    double y = 0.0;
    int t = 0;  // binary treatment, 0 or 1
    std::vector<double> x;
    std::optional<std::int64_t> context;
    std::optional<std::pair<double, double>> coord;
    std::vector<double> sig;
};

// Immutable after construction (validate() is called by every producer).
// Column-oriented access is provided by name; covariates and signatures
// live in separate namespaces mirroring the x_* / i_* CSV convention.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<UnitRecord> records,
            std::vector<std::string> covariate_names,
            std::vector<std::string> signature_names);

    const std::vector<UnitRecord>& records() const { return records_; }
    const UnitRecord& record(std::size_t i) const { return records_[i]; }
    std::size_t size() const { return records_.size(); }

    const std::vector<std::string>& covariate_names() const { return covariate_names_; }
    const std::vector<std::string>& signature_names() const { return signature_names_; }

    bool has_covariate(const std::string& name) const;
    bool has_signature(const std::string& name) const;

    // Value of a named covariate or signature column for a row. Throws
    // SchemaError if the name is unknown.
    double value(std::size_t row, const std::string& column) const;
    std::vector<double> column(const std::string& name) const;

    // Returns a copy with `values` appended as signature `name`.
    Dataset with_signature(const std::string& name, const std::vector<double>& values) const;
    // Returns a copy keeping only the listed rows (in the given order).
    Dataset subset(const std::vector<std::size_t>& rows) const;
    // Returns a copy with outcomes replaced.
    Dataset with_outcomes(const std::vector<double>& y) const;

    bool all_have_context() const;
    bool all_have_coord() const;

private:
    void validate() const;

    std::vector<UnitRecord> records_;
    std::vector<std::string> covariate_names_;
    std::vector<std::string> signature_names_;
};

// Euclidean pairwise distances over record coordinates. Requires every
// record to carry a coordinate pair.
std::vector<std::vector<double>> pairwise_distances(const Dataset& dataset);

}  // namespace localint
