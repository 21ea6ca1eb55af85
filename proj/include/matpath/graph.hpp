#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matpath/cost.hpp"
#include "matpath/edge_matrix.hpp"

namespace matpath {

// Simple path: ordered distinct node ids, the composed edge matrix, and the
// cost of that composition.
struct Path {
    std::vector<std::string> nodes;
    EdgeMatrix composed;
    double cost = 0.0;

    int edgeCount() const { return static_cast<int>(nodes.size()) - 1; }
};

// True when (cost, nodes) wins against the incumbent (bestCost, bestNodes):
// strictly cheaper beyond tol, or tied within tol with a lexicographically
// smaller node sequence. Shared by the solver and the oracle so both break
// ties identically.
bool pathBeats(double cost, const std::vector<std::string>& nodes, double bestCost,
               const std::vector<std::string>& bestNodes, double tol = 1e-12);

// Complete graph on named nodes whose edges carry square matrices of one
// shared dimension. The two orientations of an edge are transposes of each
// other; construction enforces this by storing one orientation and deriving
// the reverse. Immutable after construction.
class MatrixGraph {
public:
    static constexpr double kSymmetryTol = 1e-12;

    // One matrix per unordered node pair, keyed (u, v) in either orientation
    // and read in the u -> v direction. Every pair must appear exactly once.
    static MatrixGraph fromPairEdges(
        std::vector<std::string> nodes,
        const std::map<std::pair<std::string, std::string>, EdgeMatrix>& edges);

    // Matrices for every ordered pair; opposite orientations must match as
    // transposes within kSymmetryTol.
    static MatrixGraph fromOrderedEdges(
        std::vector<std::string> nodes,
        const std::map<std::pair<std::string, std::string>, EdgeMatrix>& edges);

    Eigen::Index dim() const { return dim_; }
    int nodeCount() const { return static_cast<int>(nodes_.size()); }
    const std::vector<std::string>& nodes() const { return nodes_; }

    int nodeIndex(const std::string& id) const;  // throws ValidationError when unknown
    std::optional<int> findNode(const std::string& id) const;

    const EdgeMatrix& edge(int from, int to) const;  // from != to
    const EdgeMatrix& edge(const std::string& from, const std::string& to) const;

private:
    MatrixGraph(std::vector<std::string> nodes, Eigen::Index dim,
                std::vector<std::optional<EdgeMatrix>> edges)
        : nodes_(std::move(nodes)), dim_(dim), edges_(std::move(edges)) {
        for (int i = 0; i < nodeCount(); ++i) index_[nodes_[i]] = i;
    }

    static std::vector<std::string> checkNodes(std::vector<std::string> nodes);

    std::vector<std::string> nodes_;
    Eigen::Index dim_ = 0;
    std::vector<std::optional<EdgeMatrix>> edges_;  // dense, diagonal unused
    std::map<std::string, int> index_;
};

// Composes the edges along the given node sequence left to right with the
// cost function's rule and evaluates the result. A single node yields the
// identity element at cost zero. Nodes must be known and pairwise distinct.
Path composePath(const MatrixGraph& graph, const std::vector<std::string>& nodeIds,
                 const CostFunction& cost);

}  // namespace matpath
