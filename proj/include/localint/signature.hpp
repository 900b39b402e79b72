#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localint/dataset.hpp"
#include "localint/graph.hpp"

namespace localint {

enum class SignatureKind {
    context_fraction,
    context_fraction_t_adjusted,
    adjacency_average,
    inverse_square_distance,
};

struct SignatureSpec {
    SignatureKind kind = SignatureKind::context_fraction;
    double t_adjustment = 0.1;    // context_fraction_t_adjusted
    double distance_floor = 1e-6; // inverse_square_distance
};

// Fraction of treated units among the *other* units sharing the row's
// context. Every context must hold at least two units.
std::vector<double> context_fraction(const Dataset& dataset);

// max(0, context_fraction - c * t). Default c = 0.1.
std::vector<double> context_fraction_t_adjusted(const Dataset& dataset, double c);

struct AdjacencyAverageResult {
    std::vector<double> values;
    std::vector<std::size_t> isolated_units;  // signature fixed at 0 for these
};

// Mean treatment of graph neighbors; isolated units get 0 and are listed
// so callers can surface a warning.
AdjacencyAverageResult adjacency_average(const Dataset& dataset, const AdjacencyGraph& graph);

// Treatment of other units weighted by 1/max(d_ij, floor)^2.
std::vector<double> inverse_square_distance(const Dataset& dataset, double floor);

// Computes the signature described by `spec` and appends it under `name`.
Dataset attach_signature(const Dataset& dataset, const SignatureSpec& spec,
                         const std::string& name,
                         const AdjacencyGraph* graph = nullptr);

}  // namespace localint
