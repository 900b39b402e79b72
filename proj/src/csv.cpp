#include "localint/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace localint {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, std::size_t row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("row " + std::to_string(row) + ", column " + col +
                              ": cannot parse '" + s + "' as a number");
    }
}

std::int64_t parse_int(const std::string& s, std::size_t row, const std::string& col) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError("row " + std::to_string(row) + ", column " + col +
                              ": cannot parse '" + s + "' as an integer");
    return v;
}

}  // namespace

Dataset load_dataset(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty (no header)");
    const auto header = split_csv_line(line);
    std::unordered_map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

    auto require = [&](const std::string& name) {
        auto it = col.find(name);
        if (it == col.end()) throw SchemaError("missing required column '" + name + "'");
        return it->second;
    };
    auto optional_col = [&](const std::optional<std::string>& name) -> std::optional<std::size_t> {
        if (!name) return std::nullopt;
        auto it = col.find(*name);
        if (it == col.end()) return std::nullopt;
        return it->second;
    };

    const std::size_t y_idx = require(schema.y);
    const std::size_t t_idx = require(schema.t);
    const auto id_idx = optional_col(schema.unit_id);
    const auto ctx_idx = optional_col(schema.context);
    const auto cx_idx = optional_col(schema.coord_x);
    const auto cy_idx = optional_col(schema.coord_y);

    std::vector<std::string> covariates = schema.covariates;
    std::vector<std::string> signatures = schema.signatures;
    if (covariates.empty() && signatures.empty()) {
        for (const auto& h : header) {
            if (h.rfind("x_", 0) == 0) covariates.push_back(h);
            else if (h.rfind("i_", 0) == 0) signatures.push_back(h);
        }
    }
    std::vector<std::size_t> cov_idx, sig_idx;
    for (const auto& c : covariates) cov_idx.push_back(require(c));
    for (const auto& s : signatures) sig_idx.push_back(require(s));

    std::vector<UnitRecord> records;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        ++row;
        if (fields.size() != header.size())
            throw ValidationError("row " + std::to_string(row) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        UnitRecord r;
        r.unit_id = id_idx ? parse_int(fields[*id_idx], row, *schema.unit_id)
                           : static_cast<std::int64_t>(row - 1);
        r.y = parse_double(fields[y_idx], row, schema.y);
        if (!std::isfinite(r.y))
            throw ValidationError("row " + std::to_string(row) + ", column " + schema.y +
                                  ": non-finite outcome");
        const double tval = parse_double(fields[t_idx], row, schema.t);
        if (tval != 0.0 && tval != 1.0)
            throw ValidationError("row " + std::to_string(row) + ", column " + schema.t +
                                  ": treatment must be 0 or 1, got " + fields[t_idx]);
        r.t = static_cast<int>(tval);
        if (ctx_idx && !fields[*ctx_idx].empty())
            r.context = parse_int(fields[*ctx_idx], row, *schema.context);
        if (cx_idx && cy_idx && !fields[*cx_idx].empty() && !fields[*cy_idx].empty())
            r.coord = {parse_double(fields[*cx_idx], row, *schema.coord_x),
                       parse_double(fields[*cy_idx], row, *schema.coord_y)};
        for (std::size_t k = 0; k < cov_idx.size(); ++k)
            r.x.push_back(parse_double(fields[cov_idx[k]], row, covariates[k]));
        for (std::size_t k = 0; k < sig_idx.size(); ++k)
            r.sig.push_back(parse_double(fields[sig_idx[k]], row, signatures[k]));
        records.push_back(std::move(r));
    }
    return Dataset(std::move(records), std::move(covariates), std::move(signatures));
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out.precision(17);
    const bool has_ctx = dataset.record(0).context.has_value();
    const bool has_coord = dataset.record(0).coord.has_value();
    out << "unit_id,y,t";
    if (has_ctx) out << ",context";
    if (has_coord) out << ",coord_x,coord_y";
    for (const auto& c : dataset.covariate_names()) out << "," << c;
    for (const auto& s : dataset.signature_names()) out << "," << s;
    out << "\n";
    for (const auto& r : dataset.records()) {
        out << r.unit_id << "," << r.y << "," << r.t;
        if (has_ctx) out << "," << (r.context ? std::to_string(*r.context) : std::string());
        if (has_coord) {
            if (r.coord) out << "," << r.coord->first << "," << r.coord->second;
            else out << ",,";
        }
        for (double v : r.x) out << "," << v;
        for (double v : r.sig) out << "," << v;
        out << "\n";
    }
}

AdjacencyGraph load_adjacency(const std::string& path, std::size_t n, bool self_loops) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    AdjacencyGraph g(n, self_loops);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw SchemaError("edge list line " + std::to_string(row) +
                              ": expected 'src,dst'");
        const auto a = parse_int(fields[0], row, "src");
        const auto b = parse_int(fields[1], row, "dst");
        if (a < 0 || b < 0)
            throw ValidationError("edge list line " + std::to_string(row) + ": negative index");
        g.add_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
    return g;
}

AdjacencyGraph load_adjacency_dense(const std::string& path, bool self_loops) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::vector<std::vector<int>> m;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        std::vector<int> vals;
        for (const auto& f : fields) {
            const auto v = parse_int(f, row, "matrix");
            if (v != 0 && v != 1)
                throw SchemaError("dense matrix line " + std::to_string(row) +
                                  ": entries must be 0 or 1");
            vals.push_back(static_cast<int>(v));
        }
        m.push_back(std::move(vals));
    }
    const std::size_t n = m.size();
    if (n == 0) throw SchemaError("dense matrix file is empty");
    for (const auto& r : m)
        if (r.size() != n) throw SchemaError("dense matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m[i][j] != m[j][i])
                throw SchemaError("dense matrix is asymmetric at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
    AdjacencyGraph g(n, self_loops);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m[i][j] == 1) g.add_edge(i, j);
    return g;
}

}  // namespace localint
