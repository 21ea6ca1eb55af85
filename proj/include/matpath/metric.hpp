#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "matpath/solver.hpp"

namespace matpath {

// All-pairs shortest-path costs between shapes, with the realizing paths.
// For the entropy cost this is a correspondence-free dissimilarity: zero
// diagonal, symmetric, non-negative, and triangle-bounded under composition.
struct DistanceTable {
    std::vector<std::string> nodes;
    Eigen::MatrixXd dist;
    std::vector<std::vector<Path>> paths;  // empty when loaded from a bare table file
    bool certified = false;

    int nodeIndex(const std::string& id) const;  // throws ValidationError when unknown
    const Path& pathBetween(const std::string& from, const std::string& to) const;
};

DistanceTable shapeDistanceTable(const MatrixGraph& graph, const SolverConfig& config = {},
                                 unsigned threads = 1);

// {"nodes": [...], "certified": bool, "dist": [[...]]}; paths are not stored,
// so a loaded table supports neighbor queries but not path lookups. This is
// also the import format for externally computed baseline tables.
std::string distanceTableToJson(const DistanceTable& table);
DistanceTable distanceTableFromJson(const std::string& text);
void saveDistanceTable(const DistanceTable& table, const std::filesystem::path& file);
DistanceTable loadDistanceTable(const std::filesystem::path& file);

// The k nearest nodes to the query, ascending by distance, ties broken by
// node id; the query itself never appears.
std::vector<std::string> nearestNeighbors(const DistanceTable& table, const std::string& query,
                                          int k);

// Retrieval quality per query i and neighbor count k: the fraction of true
// positives among the first k neighbors, normalized by min(m_i, k) where m_i
// counts the other members of the query's family. Queries whose family has no
// other member are undefined (NaN) and excluded from the aggregates.
struct RetrievalEval {
    std::vector<std::string> nodes;
    std::vector<std::string> labels;   // per node
    Eigen::MatrixXd g;                 // node x k (k = 1..nodes-1); NaN = undefined
    std::vector<double> meanPerK;
    std::vector<double> stdPerK;       // population standard deviation
    std::vector<int> definedPerK;      // queries entering the aggregates
};
RetrievalEval evaluateRetrieval(const DistanceTable& table,
                                const std::map<std::string, std::string>& labels);

std::string retrievalSummaryCsv(const RetrievalEval& eval);   // k,mean_g,std_g
std::string retrievalPerQueryCsv(const RetrievalEval& eval);  // query,k,g

}  // namespace matpath
