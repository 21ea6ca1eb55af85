#include "matpath/graph_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "matpath/errors.hpp"

namespace matpath {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson matrixToJson(const Eigen::MatrixXd& m) {
    OrderedJson rows = OrderedJson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        OrderedJson row = OrderedJson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrixFromJson(const OrderedJson& rows, Eigen::Index expected) {
    if (!rows.is_array() || rows.empty()) throw ValidationError("matrix must be a non-empty array");
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    if (r != expected) {
        std::ostringstream msg;
        msg << "matrix has " << r << " rows, expected " << expected;
        throw ValidationError(msg.str());
    }
    Eigen::MatrixXd m(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = rows[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != r) {
            throw ValidationError("matrix rows must all match the declared dimension");
        }
        for (Eigen::Index j = 0; j < r; ++j) {
            const auto& cell = row[static_cast<size_t>(j)];
            if (!cell.is_number()) throw ValidationError("matrix entries must be numbers");
            m(i, j) = cell.get<double>();
        }
    }
    return m;
}

}  // namespace

std::string graphToJson(const MatrixGraph& graph) {
    OrderedJson doc;
    doc["n"] = graph.dim();
    doc["nodes"] = graph.nodes();
    OrderedJson edges = OrderedJson::array();
    // One entry per unordered pair, from < to by node id.
    std::vector<std::string> sorted = graph.nodes();
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
        for (size_t j = i + 1; j < sorted.size(); ++j) {
            OrderedJson entry;
            entry["from"] = sorted[i];
            entry["to"] = sorted[j];
            entry["matrix"] = matrixToJson(graph.edge(sorted[i], sorted[j]).entries());
            edges.push_back(std::move(entry));
        }
    }
    doc["edges"] = std::move(edges);
    return doc.dump();
}

MatrixGraph parseGraphJson(const std::string& text) {
    OrderedJson doc;
    try {
        doc = OrderedJson::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("invalid graph JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("nodes") || !doc.contains("edges")) {
        throw ValidationError("graph JSON needs fields n, nodes, edges");
    }
    if (!doc["n"].is_number_integer() || doc["n"].get<Eigen::Index>() < 1) {
        throw ValidationError("field n must be a positive integer");
    }
    const Eigen::Index dim = doc["n"].get<Eigen::Index>();
    if (!doc["nodes"].is_array()) throw ValidationError("field nodes must be an array");
    std::vector<std::string> nodes;
    for (const auto& id : doc["nodes"]) {
        if (!id.is_string()) throw ValidationError("node ids must be strings");
        nodes.push_back(id.get<std::string>());
    }
    if (!doc["edges"].is_array()) throw ValidationError("field edges must be an array");
    std::map<std::pair<std::string, std::string>, EdgeMatrix> edges;
    for (const auto& entry : doc["edges"]) {
        if (!entry.is_object() || !entry.contains("from") || !entry.contains("to") ||
            !entry.contains("matrix")) {
            throw ValidationError("each edge needs fields from, to, matrix");
        }
        const std::string from = entry["from"].get<std::string>();
        const std::string to = entry["to"].get<std::string>();
        if (!(from < to)) {
            throw ValidationError("edge pairs must be stored with from < to, got " + from + ", " +
                                  to);
        }
        Eigen::MatrixXd m = matrixFromJson(entry["matrix"], dim);
        EdgeMatrix e = dim == 1 ? EdgeMatrix::scalar(m(0, 0))
                                : EdgeMatrix::doublyStochastic(std::move(m));
        if (!edges.emplace(std::make_pair(from, to), std::move(e)).second) {
            throw ValidationError("duplicate edge entry for pair " + from + "-" + to);
        }
    }
    return MatrixGraph::fromPairEdges(std::move(nodes), edges);
}

void saveGraph(const MatrixGraph& graph, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot open file for writing: " + file.string());
    out << graphToJson(graph);
    if (!out) throw ValidationError("failed writing graph file: " + file.string());
}

MatrixGraph loadGraph(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open graph file: " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parseGraphJson(buffer.str());
}

}  // namespace matpath
