#include "localint/graph.hpp"

#include <algorithm>

namespace localint {

void AdjacencyGraph::add_edge(std::size_t a, std::size_t b) {
    if (a >= n_ || b >= n_)
        throw ValidationError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") out of range for n=" + std::to_string(n_));
    if (a == b) return;  // self-relations are carried by the flag
    edges_.insert({std::min(a, b), std::max(a, b)});
}

bool AdjacencyGraph::adjacent(std::size_t a, std::size_t b) const {
    if (a == b) return self_loops_;
    return edges_.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<std::size_t> AdjacencyGraph::neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& [a, b] : edges_) {
        if (a == i) out.push_back(b);
        else if (b == i) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace localint
