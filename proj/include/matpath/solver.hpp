#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "matpath/cost.hpp"
#include "matpath/graph.hpp"

namespace matpath {

struct SolverConfig {
    std::optional<int> kMax;                          // cap on path edge count
    std::shared_ptr<const CostFunction> cost;         // defaults to total entropy
    bool recordCandidates = false;                    // keep per-position candidate sets
    double tieTol = 1e-12;                            // equal-cost tolerance for tie breaks

    const CostFunction& costOrDefault() const;
};

struct SolveStats {
    std::uint64_t pathsEvaluated = 0;  // complete paths costed (direct paths included)
    std::uint64_t edgesExplored = 0;   // edge composition steps
    std::uint64_t prunedCount = 0;     // candidate exclusions plus cut search branches
    double seconds = 0.0;

    SolveStats& operator+=(const SolveStats& other);
};

struct ShortestPathResult {
    std::string source;
    std::vector<Path> best;  // indexed like graph nodes; best[source] is the trivial path
    bool certified = false;  // search ran to natural termination, all path lengths covered
    int kReached = 1;        // largest edge count examined
    SolveStats stats;
    // When recorded: candidates[k][target index] = sorted node indices admitted
    // at path position k for that target.
    std::map<int, std::vector<std::vector<int>>> candidates;
};

// Cost bookkeeping the pruning rule reads. bestExactPrev[p] is the cheapest
// cost found among paths to p with exactly the previous edge count;
// incumbent[p] is the cheapest found at any length so far. The two are kept
// apart because the candidate test compares an exact-length bound for the
// intermediate against the incumbent of the target; collapsing them would
// prune on the wrong bound in graphs without optimal substructure.
struct SearchState {
    std::vector<double> bestExactPrev;
    std::vector<double> incumbent;
};

// Nodes admissible at the next path position towards `target`: every p other
// than source and target whose exact-length best is strictly below the
// target's incumbent. Sorted ascending.
std::vector<int> computeCandidateSet(const SearchState& state, int source, int target);

// Globally optimal simple paths from source to every other node, found by
// iterative deepening over path lengths with candidate-set pruning. With kMax
// set, only paths of at most kMax edges compete and certified is false unless
// the search exhausted naturally before the cap.
ShortestPathResult shortestPathsFrom(const MatrixGraph& graph, const std::string& source,
                                     const SolverConfig& config = {});

// Cheapest simple path with exactly k edges, found by depth-first search with
// prefix-cost bounding (valid because cost is monotone under composition).
// Ties go to the lexicographically smallest node sequence. Throws
// InfeasibleError when k exceeds nodeCount() - 1.
Path fixedKPath(const MatrixGraph& graph, const std::string& source, const std::string& target,
                int k, const SolverConfig& config = {});

// Exhaustive reference: enumerates every simple path from source to target
// (up to config.kMax edges when set) with no pruning and returns the best
// under the shared tie rule. Refuses graphs above nodeCap nodes.
Path bruteForceOracle(const MatrixGraph& graph, const std::string& source,
                      const std::string& target, const SolverConfig& config = {}, int nodeCap = 9);

struct AllPairsResult {
    std::vector<std::string> nodes;
    std::vector<std::vector<Path>> path;  // path[i][j] from node i to node j
    bool certified = false;
    SolveStats stats;
};

// Shortest paths between all node pairs. For transpose-symmetric costs each
// unordered pair is solved once and the reverse direction is derived by
// reversing the path and transposing its matrix. Sources run in parallel on
// up to `threads` threads; the result does not depend on the thread count.
AllPairsResult allPairs(const MatrixGraph& graph, const SolverConfig& config = {},
                        unsigned threads = 1);

// Single-source result as JSON: source, certified, kReached, stats, and one
// entry per target with path and cost. Deterministic field order; wall time
// only appears when asked for, keeping default output reproducible.
std::string resultToJson(const ShortestPathResult& result, bool includeTiming = false);

}  // namespace matpath
