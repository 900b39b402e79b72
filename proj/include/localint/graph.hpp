#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "localint/error.hpp"

namespace localint {

// Symmetric unit-pair relation. Edges are stored as unordered index pairs
// (i < j); self-relations are carried by the self_loops flag rather than
// explicit (i,i) entries.
class AdjacencyGraph {
public:
    AdjacencyGraph(std::size_t n, bool self_loops = false) : n_(n), self_loops_(self_loops) {
        if (n == 0) throw ValidationError("adjacency graph must have n >= 1");
    }

    void add_edge(std::size_t a, std::size_t b);

    std::size_t n() const { return n_; }
    bool self_loops() const { return self_loops_; }
    const std::set<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

    bool adjacent(std::size_t a, std::size_t b) const;
    // Neighbors excluding self regardless of the self_loops flag.
    std::vector<std::size_t> neighbors(std::size_t i) const;

private:
    std::size_t n_;
    bool self_loops_;
    std::set<std::pair<std::size_t, std::size_t>> edges_;
};

}  // namespace localint
