#include "localint/signature.hpp"

#include <algorithm>
#include <map>

#include "localint/error.hpp"

namespace localint {

std::vector<double> context_fraction(const Dataset& dataset) {
    if (!dataset.all_have_context())
        throw ValidationError("context_fraction requires a context label on every record");
    std::map<std::int64_t, std::pair<std::size_t, std::size_t>> counts;  // context -> (treated, total)
    for (const auto& r : dataset.records()) {
        auto& c = counts[*r.context];
        c.first += static_cast<std::size_t>(r.t);
        c.second += 1;
    }
    for (const auto& [ctx, c] : counts)
        if (c.second < 2)
            throw ValidationError("context " + std::to_string(ctx) +
                                  " has a single unit; peer fraction is undefined");
    std::vector<double> out(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& r = dataset.record(i);
        const auto& c = counts[*r.context];
        out[i] = static_cast<double>(c.first - static_cast<std::size_t>(r.t)) /
                 static_cast<double>(c.second - 1);
    }
    return out;
}

std::vector<double> context_fraction_t_adjusted(const Dataset& dataset, double c) {
    if (c < 0) throw ValidationError("t-adjustment coefficient must be >= 0");
    auto out = context_fraction(dataset);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::max(0.0, out[i] - c * dataset.record(i).t);
    return out;
}

AdjacencyAverageResult adjacency_average(const Dataset& dataset, const AdjacencyGraph& graph) {
    if (graph.n() != dataset.size())
        throw ValidationError("graph has " + std::to_string(graph.n()) + " nodes but dataset has " +
                              std::to_string(dataset.size()) + " units");
    AdjacencyAverageResult res;
    res.values.resize(dataset.size(), 0.0);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto nbrs = graph.neighbors(i);
        if (nbrs.empty()) {
            res.isolated_units.push_back(i);
            continue;
        }
        double treated = 0;
        for (std::size_t j : nbrs) treated += dataset.record(j).t;
        res.values[i] = treated / static_cast<double>(nbrs.size());
    }
    return res;
}

std::vector<double> inverse_square_distance(const Dataset& dataset, double floor) {
    if (floor <= 0) throw ValidationError("distance floor must be > 0");
    if (dataset.size() < 2)
        throw ValidationError("inverse_square_distance needs at least 2 units");
    const auto d = pairwise_distances(dataset);
    const std::size_t n = dataset.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dd = std::max(d[i][j], floor);
            const double w = 1.0 / (dd * dd);
            num += w * dataset.record(j).t;
            den += w;
        }
        out[i] = num / den;
    }
    return out;
}

Dataset attach_signature(const Dataset& dataset, const SignatureSpec& spec,
                         const std::string& name, const AdjacencyGraph* graph) {
    if (dataset.has_signature(name))
        throw ValidationError("signature column '" + name + "' already exists");
    std::vector<double> values;
    switch (spec.kind) {
        case SignatureKind::context_fraction:
            values = context_fraction(dataset);
            break;
        case SignatureKind::context_fraction_t_adjusted:
            values = context_fraction_t_adjusted(dataset, spec.t_adjustment);
            break;
        case SignatureKind::adjacency_average: {
            if (graph == nullptr)
                throw ValidationError("adjacency_average signature requires a graph");
            values = adjacency_average(dataset, *graph).values;
            break;
        }
        case SignatureKind::inverse_square_distance:
            values = inverse_square_distance(dataset, spec.distance_floor);
            break;
    }
    return dataset.with_signature(name, values);
}

}  // namespace localint
