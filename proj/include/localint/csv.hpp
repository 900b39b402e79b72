#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localint/dataset.hpp"
#include "localint/graph.hpp"

namespace localint {

// Column-name mapping for dataset CSVs. Empty covariate/signature lists
// trigger auto-detection: columns named x_* become covariates and i_*
// become signatures, in header order.
struct CsvSchema {
    std::string y = "y";
    std::string t = "t";
    std::optional<std::string> unit_id = "unit_id";  // falls back to row index when absent
    std::optional<std::string> context = "context";
    std::optional<std::string> coord_x = "coord_x";
    std::optional<std::string> coord_y = "coord_y";
    std::vector<std::string> covariates;  // empty -> auto-detect x_*
    std::vector<std::string> signatures;  // empty -> auto-detect i_*
};

Dataset load_dataset(const std::string& path, const CsvSchema& schema = {});
void save_dataset(const Dataset& dataset, const std::string& path);

// Edge-list mode: lines of `src,dst` 0-based indices, n given by caller.
AdjacencyGraph load_adjacency(const std::string& path, std::size_t n, bool self_loops);
// Dense mode: rows of comma-separated 0/1; n taken from the file. The
// matrix must be symmetric; diagonal ones set the self_loops flag.
AdjacencyGraph load_adjacency_dense(const std::string& path, bool self_loops);

}  // namespace localint
