#include "matpath/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "matpath/errors.hpp"

namespace matpath {

bool pathBeats(double cost, const std::vector<std::string>& nodes, double bestCost,
               const std::vector<std::string>& bestNodes, double tol) {
    if (cost < bestCost - tol) return true;
    if (cost > bestCost + tol) return false;
    return std::lexicographical_compare(nodes.begin(), nodes.end(), bestNodes.begin(),
                                        bestNodes.end());
}

std::vector<std::string> MatrixGraph::checkNodes(std::vector<std::string> nodes) {
    if (nodes.size() < 2) throw ValidationError("graph needs at least 2 nodes");
    std::set<std::string> seen;
    for (const auto& id : nodes) {
        if (id.empty()) throw ValidationError("node ids must be non-empty");
        if (!seen.insert(id).second) throw ValidationError("duplicate node id: " + id);
    }
    return nodes;
}

namespace {

// Resolves edge keys to index pairs, rejecting unknown nodes, loops, and
// duplicate coverage of one pair in the same orientation set.
std::pair<int, int> resolveKey(const std::map<std::string, int>& index,
                               const std::pair<std::string, std::string>& key) {
    const auto from = index.find(key.first);
    const auto to = index.find(key.second);
    if (from == index.end()) throw ValidationError("edge refers to unknown node: " + key.first);
    if (to == index.end()) throw ValidationError("edge refers to unknown node: " + key.second);
    if (from->second == to->second)
        throw ValidationError("self-edge not allowed: " + key.first);
    return {from->second, to->second};
}

}  // namespace

MatrixGraph MatrixGraph::fromPairEdges(
    std::vector<std::string> nodes,
    const std::map<std::pair<std::string, std::string>, EdgeMatrix>& edges) {
    auto checked = checkNodes(std::move(nodes));
    const int count = static_cast<int>(checked.size());
    std::map<std::string, int> index;
    for (int i = 0; i < count; ++i) index[checked[i]] = i;

    std::vector<std::optional<EdgeMatrix>> dense(static_cast<size_t>(count) * count);
    Eigen::Index dim = 0;
    for (const auto& [key, matrix] : edges) {
        const auto [from, to] = resolveKey(index, key);
        if (dim == 0) dim = matrix.dim();
        if (matrix.dim() != dim) {
            std::ostringstream msg;
            msg << "edge " << key.first << "-" << key.second << " has dimension " << matrix.dim()
                << ", expected " << dim;
            throw ValidationError(msg.str());
        }
        auto& fwd = dense[static_cast<size_t>(from) * count + to];
        auto& rev = dense[static_cast<size_t>(to) * count + from];
        if (fwd || rev) {
            throw ValidationError("edge given twice for pair " + key.first + "-" + key.second);
        }
        fwd = matrix;
        rev = matrix.transposed();
    }
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            if (!dense[static_cast<size_t>(i) * count + j]) {
                throw ValidationError("graph is not complete: missing edge " + checked[i] + "-" +
                                      checked[j]);
            }
        }
    }
    return MatrixGraph(std::move(checked), dim, std::move(dense));
}

MatrixGraph MatrixGraph::fromOrderedEdges(
    std::vector<std::string> nodes,
    const std::map<std::pair<std::string, std::string>, EdgeMatrix>& edges) {
    auto checked = checkNodes(std::move(nodes));
    const int count = static_cast<int>(checked.size());
    std::map<std::string, int> index;
    for (int i = 0; i < count; ++i) index[checked[i]] = i;

    std::vector<const EdgeMatrix*> given(static_cast<size_t>(count) * count, nullptr);
    for (const auto& [key, matrix] : edges) {
        const auto [from, to] = resolveKey(index, key);
        auto& slot = given[static_cast<size_t>(from) * count + to];
        if (slot) throw ValidationError("edge given twice for pair " + key.first + "-" + key.second);
        slot = &matrix;
    }
    std::map<std::pair<std::string, std::string>, EdgeMatrix> canonical;
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            const EdgeMatrix* fwd = given[static_cast<size_t>(i) * count + j];
            const EdgeMatrix* rev = given[static_cast<size_t>(j) * count + i];
            if (!fwd || !rev) {
                throw ValidationError("graph is not complete: missing edge " + checked[i] + "-" +
                                      checked[j]);
            }
            const double gap =
                (fwd->entries() - rev->entries().transpose()).cwiseAbs().maxCoeff();
            if (gap > kSymmetryTol) {
                std::ostringstream msg;
                msg << "edge orientations are not transposes for pair " << checked[i] << "-"
                    << checked[j] << ": max deviation " << gap;
                throw ValidationError(msg.str());
            }
            canonical.emplace(std::make_pair(checked[i], checked[j]), *fwd);
        }
    }
    return fromPairEdges(std::move(checked), canonical);
}

int MatrixGraph::nodeIndex(const std::string& id) const {
    const auto found = findNode(id);
    if (!found) throw ValidationError("unknown node: " + id);
    return *found;
}

std::optional<int> MatrixGraph::findNode(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const EdgeMatrix& MatrixGraph::edge(int from, int to) const {
    const int count = nodeCount();
    if (from < 0 || from >= count || to < 0 || to >= count) {
        throw ValidationError("edge index out of range");
    }
    if (from == to) throw ValidationError("no edge matrix on the diagonal");
    return *edges_[static_cast<size_t>(from) * count + to];
}

const EdgeMatrix& MatrixGraph::edge(const std::string& from, const std::string& to) const {
    return edge(nodeIndex(from), nodeIndex(to));
}

Path composePath(const MatrixGraph& graph, const std::vector<std::string>& nodeIds,
                 const CostFunction& cost) {
    if (nodeIds.empty()) throw ValidationError("path needs at least one node");
    std::set<std::string> seen;
    std::vector<int> indices;
    indices.reserve(nodeIds.size());
    for (const auto& id : nodeIds) {
        if (!seen.insert(id).second) throw ValidationError("path repeats node: " + id);
        indices.push_back(graph.nodeIndex(id));
    }
    const Eigen::Index n = graph.dim();
    if (indices.size() == 1) {
        EdgeMatrix ident = cost.identity(n == 0 ? 1 : n);
        const double c = cost.evaluate(ident);
        return Path{nodeIds, std::move(ident), c};
    }
    EdgeMatrix composed = graph.edge(indices[0], indices[1]);
    for (size_t i = 2; i < indices.size(); ++i) {
        composed = cost.compose(composed, graph.edge(indices[i - 1], indices[i]));
    }
    const double c = cost.evaluate(composed);
    return Path{nodeIds, std::move(composed), c};
}

}  // namespace matpath
