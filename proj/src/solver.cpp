#include "matpath/solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "matpath/errors.hpp"
#include "matpath/parallel.hpp"

namespace matpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Fixed-capacity bitset sized at runtime; bit indices are node indices.
class DynBitset {
public:
    DynBitset() = default;
    explicit DynBitset(int bits) : words_(static_cast<size_t>((bits + 63) / 64), 0) {}

    void set(int i) { words_[static_cast<size_t>(i) >> 6] |= 1ull << (i & 63); }
    void reset(int i) { words_[static_cast<size_t>(i) >> 6] &= ~(1ull << (i & 63)); }
    bool test(int i) const { return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u; }

    void andWith(const DynBitset& o) {
        for (size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    }
    void andNot(const DynBitset& o) {
        for (size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    }
    bool none() const {
        for (const auto w : words_)
            if (w) return false;
        return true;
    }
    template <class F>
    void forEachSet(F&& f) const {  // ascending bit order
        for (size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t x = words_[w];
            while (x) {
                f(static_cast<int>(w * 64) + std::countr_zero(x));
                x &= x - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

std::vector<std::string> toNames(const MatrixGraph& g, const std::vector<int>& indices, int last) {
    std::vector<std::string> names;
    names.reserve(indices.size() + 1);
    for (const int i : indices) names.push_back(g.nodes()[static_cast<size_t>(i)]);
    names.push_back(g.nodes()[static_cast<size_t>(last)]);
    return names;
}

}  // namespace

const CostFunction& SolverConfig::costOrDefault() const {
    static const TotalEntropyCost fallback;
    return cost ? *cost : fallback;
}

SolveStats& SolveStats::operator+=(const SolveStats& other) {
    pathsEvaluated += other.pathsEvaluated;
    edgesExplored += other.edgesExplored;
    prunedCount += other.prunedCount;
    seconds += other.seconds;
    return *this;
}

std::vector<int> computeCandidateSet(const SearchState& state, int source, int target) {
    std::vector<int> out;
    const int count = static_cast<int>(state.bestExactPrev.size());
    for (int p = 0; p < count; ++p) {
        if (p == source || p == target) continue;
        if (state.bestExactPrev[static_cast<size_t>(p)] <
            state.incumbent[static_cast<size_t>(target)]) {
            out.push_back(p);
        }
    }
    return out;
}

ShortestPathResult shortestPathsFrom(const MatrixGraph& graph, const std::string& source,
                                     const SolverConfig& config) {
    const Stopwatch watch;
    const CostFunction& cost = config.costOrDefault();
    const int count = graph.nodeCount();
    const int s = graph.nodeIndex(source);
    if (config.kMax && *config.kMax < 1) throw ValidationError("kMax must be at least 1");
    const int kEff = std::min(config.kMax.value_or(count - 1), count - 1);
    const Eigen::Index n = graph.dim();

    ShortestPathResult result;
    result.source = source;

    // Direct paths seed both the incumbents and the exact-length-1 bests.
    std::vector<double> bestCost(static_cast<size_t>(count), kInf);
    std::vector<std::vector<std::string>> bestNodes(static_cast<size_t>(count));
    std::vector<Eigen::MatrixXd> bestMat(static_cast<size_t>(count));
    std::vector<double> exactPrev(static_cast<size_t>(count), kInf);
    for (int t = 0; t < count; ++t) {
        if (t == s) continue;
        const Eigen::MatrixXd& direct = graph.edge(s, t).entries();
        bestCost[static_cast<size_t>(t)] = cost.evaluate(direct);
        bestNodes[static_cast<size_t>(t)] = {source, graph.nodes()[static_cast<size_t>(t)]};
        bestMat[static_cast<size_t>(t)] = direct;
        exactPrev[static_cast<size_t>(t)] = bestCost[static_cast<size_t>(t)];
        ++result.stats.pathsEvaluated;
    }
    result.kReached = 1;

    // Candidate sets are frozen per position the iteration they are formed;
    // admitted[pos - 2][p] holds the targets that accept p at position pos.
    std::vector<std::vector<DynBitset>> admitted;
    std::vector<Eigen::MatrixXd> prefix(static_cast<size_t>(kEff) + 1);
    for (auto& m : prefix) m.resize(n, n);
    Eigen::MatrixXd full(n, n);
    std::vector<int> prefixNodes;
    std::vector<double> exactCur(static_cast<size_t>(count), kInf);
    bool naturalStop = false;

    for (int k = 2; k <= kEff; ++k) {
        SearchState state{exactPrev, bestCost};
        auto& masks = admitted.emplace_back(static_cast<size_t>(count), DynBitset(count));
        std::vector<std::vector<int>> recorded;
        if (config.recordCandidates) recorded.resize(static_cast<size_t>(count));
        for (int t = 0; t < count; ++t) {
            if (t == s) continue;
            const std::vector<int> set = computeCandidateSet(state, s, t);
            result.stats.prunedCount +=
                static_cast<std::uint64_t>(count - 2 - static_cast<int>(set.size()));
            for (const int p : set) masks[static_cast<size_t>(p)].set(t);
            if (config.recordCandidates) recorded[static_cast<size_t>(t)] = set;
        }
        if (config.recordCandidates) result.candidates[k] = std::move(recorded);

        std::fill(exactCur.begin(), exactCur.end(), kInf);
        std::uint64_t evaluatedThisLength = 0;
        prefixNodes.clear();
        DynBitset prefixMask(count);

        // Depth-first extension over positions 2..k; a prefix survives only
        // while some node outside it still admits every chosen intermediate
        // at its position as a target.
        auto extend = [&](auto&& self, int depth, const DynBitset& compatible) -> void {
            for (int u = 0; u < count; ++u) {
                if (u == s || prefixMask.test(u)) continue;
                DynBitset narrowed = compatible;
                narrowed.andWith(admitted[static_cast<size_t>(depth - 2)][static_cast<size_t>(u)]);
                narrowed.andNot(prefixMask);
                // The target can never equal u itself: candidate sets exclude
                // the target, so bit u is already clear in u's own mask.
                if (narrowed.none()) {
                    ++result.stats.prunedCount;
                    continue;
                }
                const int prev = prefixNodes.empty() ? s : prefixNodes.back();
                if (depth == 2) {
                    prefix[2] = graph.edge(s, u).entries();
                } else {
                    cost.composeInto(prefix[static_cast<size_t>(depth)],
                                     prefix[static_cast<size_t>(depth - 1)],
                                     graph.edge(prev, u).entries());
                    ++result.stats.edgesExplored;
                }
                prefixNodes.push_back(u);
                prefixMask.set(u);
                if (depth == k) {
                    narrowed.forEachSet([&](int t) {
                        cost.composeInto(full, prefix[static_cast<size_t>(k)],
                                         graph.edge(u, t).entries());
                        ++result.stats.edgesExplored;
                        const double c = cost.evaluate(full);
                        ++result.stats.pathsEvaluated;
                        ++evaluatedThisLength;
                        auto& exact = exactCur[static_cast<size_t>(t)];
                        exact = std::min(exact, c);
                        auto& incumbent = bestCost[static_cast<size_t>(t)];
                        if (c <= incumbent + config.tieTol) {
                            auto names = toNames(graph, prefixNodes, t);
                            names.insert(names.begin(), source);
                            if (pathBeats(c, names, incumbent, bestNodes[static_cast<size_t>(t)],
                                          config.tieTol)) {
                                incumbent = c;
                                bestNodes[static_cast<size_t>(t)] = std::move(names);
                                bestMat[static_cast<size_t>(t)] = full;
                            }
                        }
                    });
                } else {
                    self(self, depth + 1, narrowed);
                }
                prefixNodes.pop_back();
                prefixMask.reset(u);
            }
        };
        DynBitset all(count);
        for (int t = 0; t < count; ++t) {
            if (t != s) all.set(t);
        }
        extend(extend, 2, all);

        exactPrev = exactCur;
        if (evaluatedThisLength == 0) {
            naturalStop = true;
            break;
        }
        result.kReached = k;
    }

    result.certified = naturalStop || kEff == count - 1;

    result.best.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) {
        if (t == s) {
            EdgeMatrix ident = cost.identity(n);
            const double c = cost.evaluate(ident);
            result.best.push_back(Path{{source}, std::move(ident), c});
        } else {
            result.best.push_back(Path{bestNodes[static_cast<size_t>(t)],
                                       EdgeMatrix::unchecked(bestMat[static_cast<size_t>(t)]),
                                       bestCost[static_cast<size_t>(t)]});
        }
    }
    result.stats.seconds = watch.seconds();
    return result;
}

Path fixedKPath(const MatrixGraph& graph, const std::string& source, const std::string& target,
                int k, const SolverConfig& config) {
    const CostFunction& cost = config.costOrDefault();
    const int count = graph.nodeCount();
    const int s = graph.nodeIndex(source);
    const int t = graph.nodeIndex(target);
    if (s == t) throw ValidationError("source and target must differ");
    if (k < 1) throw ValidationError("edge count k must be at least 1");
    if (k > count - 1) {
        std::ostringstream msg;
        msg << "no simple path with " << k << " edges in a graph of " << count
            << " nodes (max " << count - 1 << ")";
        throw InfeasibleError(msg.str());
    }
    const Eigen::Index n = graph.dim();

    if (k == 1) {
        const EdgeMatrix& direct = graph.edge(s, t);
        return Path{{source, target}, direct, cost.evaluate(direct)};
    }

    // Enumerate intermediates in node-id order so the first completed path in
    // any cost tie is the lexicographically smallest sequence; the incumbent
    // bound may then cut tied branches without disturbing the tie rule.
    std::vector<int> order(static_cast<size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return graph.nodes()[static_cast<size_t>(a)] < graph.nodes()[static_cast<size_t>(b)]; });

    std::vector<Eigen::MatrixXd> prefix(static_cast<size_t>(k) + 1);
    for (auto& m : prefix) m.resize(n, n);
    Eigen::MatrixXd full(n, n);
    std::vector<bool> used(static_cast<size_t>(count), false);
    used[static_cast<size_t>(s)] = true;
    used[static_cast<size_t>(t)] = true;
    std::vector<int> chain;

    double bestCostFound = kInf;
    std::vector<std::string> bestNodesFound;
    Eigen::MatrixXd bestMatFound;

    auto search = [&](auto&& self, int depth) -> void {
        for (const int u : order) {
            if (used[static_cast<size_t>(u)]) continue;
            const int prev = chain.empty() ? s : chain.back();
            if (depth == 2) {
                prefix[2] = graph.edge(s, u).entries();
            } else {
                cost.composeInto(prefix[static_cast<size_t>(depth)],
                                 prefix[static_cast<size_t>(depth - 1)],
                                 graph.edge(prev, u).entries());
            }
            // A prefix at or above the incumbent cannot complete any cheaper:
            // composition never lowers the cost.
            if (cost.evaluate(prefix[static_cast<size_t>(depth)]) >= bestCostFound - config.tieTol) {
                continue;
            }
            chain.push_back(u);
            used[static_cast<size_t>(u)] = true;
            if (depth == k) {
                cost.composeInto(full, prefix[static_cast<size_t>(k)], graph.edge(u, t).entries());
                const double c = cost.evaluate(full);
                auto names = toNames(graph, chain, t);
                names.insert(names.begin(), source);
                if (pathBeats(c, names, bestCostFound, bestNodesFound, config.tieTol)) {
                    bestCostFound = c;
                    bestNodesFound = std::move(names);
                    bestMatFound = full;
                }
            } else {
                self(self, depth + 1);
            }
            chain.pop_back();
            used[static_cast<size_t>(u)] = false;
        }
    };
    search(search, 2);

    return Path{std::move(bestNodesFound), EdgeMatrix::unchecked(std::move(bestMatFound)),
                bestCostFound};
}

Path bruteForceOracle(const MatrixGraph& graph, const std::string& source,
                      const std::string& target, const SolverConfig& config, int nodeCap) {
    const CostFunction& cost = config.costOrDefault();
    const int count = graph.nodeCount();
    if (count > nodeCap) {
        std::ostringstream msg;
        msg << "node-count cap exceeded: " << count << " nodes > cap " << nodeCap;
        throw ValidationError(msg.str());
    }
    const int s = graph.nodeIndex(source);
    const int t = graph.nodeIndex(target);
    if (s == t) throw ValidationError("source and target must differ");
    if (config.kMax && *config.kMax < 1) throw ValidationError("kMax must be at least 1");
    const int kEff = std::min(config.kMax.value_or(count - 1), count - 1);
    const Eigen::Index n = graph.dim();

    std::vector<Eigen::MatrixXd> prefix(static_cast<size_t>(kEff) + 1);
    for (auto& m : prefix) m.resize(n, n);
    std::vector<bool> used(static_cast<size_t>(count), false);
    used[static_cast<size_t>(s)] = true;
    std::vector<int> chain;

    double bestCostFound = kInf;
    std::vector<std::string> bestNodesFound;
    Eigen::MatrixXd bestMatFound;

    // Plain exhaustive walk: every simple path of up to kEff edges that ends
    // at the target is costed. No bounds, no candidate sets.
    auto walk = [&](auto&& self, int depth) -> void {
        for (int u = 0; u < count; ++u) {
            if (used[static_cast<size_t>(u)]) continue;
            const int prev = chain.empty() ? s : chain.back();
            if (depth == 1) {
                prefix[1] = graph.edge(s, u).entries();
            } else {
                cost.composeInto(prefix[static_cast<size_t>(depth)],
                                 prefix[static_cast<size_t>(depth - 1)],
                                 graph.edge(prev, u).entries());
            }
            if (u == t) {
                const double c = cost.evaluate(prefix[static_cast<size_t>(depth)]);
                auto names = toNames(graph, chain, t);
                names.insert(names.begin(), source);
                if (pathBeats(c, names, bestCostFound, bestNodesFound, config.tieTol)) {
                    bestCostFound = c;
                    bestNodesFound = std::move(names);
                    bestMatFound = prefix[static_cast<size_t>(depth)];
                }
                continue;
            }
            if (depth < kEff) {
                chain.push_back(u);
                used[static_cast<size_t>(u)] = true;
                self(self, depth + 1);
                chain.pop_back();
                used[static_cast<size_t>(u)] = false;
            }
        }
    };
    walk(walk, 1);

    return Path{std::move(bestNodesFound), EdgeMatrix::unchecked(std::move(bestMatFound)),
                bestCostFound};
}

AllPairsResult allPairs(const MatrixGraph& graph, const SolverConfig& config, unsigned threads) {
    const Stopwatch watch;
    const CostFunction& cost = config.costOrDefault();
    const int count = graph.nodeCount();
    const bool symmetric = cost.transposeSymmetric();
    const int sources = symmetric ? count - 1 : count;

    std::vector<ShortestPathResult> runs(static_cast<size_t>(sources));
    parallelFor(sources, threads, [&](int i) {
        runs[static_cast<size_t>(i)] =
            shortestPathsFrom(graph, graph.nodes()[static_cast<size_t>(i)], config);
    });

    AllPairsResult all;
    all.nodes = graph.nodes();
    all.certified = true;
    all.path.resize(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        all.path[static_cast<size_t>(i)].reserve(static_cast<size_t>(count));
        for (int j = 0; j < count; ++j) {
            if (i == j) {
                EdgeMatrix ident = cost.identity(graph.dim());
                const double c = cost.evaluate(ident);
                all.path[static_cast<size_t>(i)].push_back(
                    Path{{graph.nodes()[static_cast<size_t>(i)]}, std::move(ident), c});
            } else if (!symmetric || i < j) {
                all.path[static_cast<size_t>(i)].push_back(
                    runs[static_cast<size_t>(i)].best[static_cast<size_t>(j)]);
            } else {
                // Reverse of the solved direction: same cost, transposed matrix.
                const Path& fwd = runs[static_cast<size_t>(j)].best[static_cast<size_t>(i)];
                all.path[static_cast<size_t>(i)].push_back(
                    Path{{fwd.nodes.rbegin(), fwd.nodes.rend()}, fwd.composed.transposed(),
                         fwd.cost});
            }
        }
    }
    for (const auto& run : runs) {
        all.certified = all.certified && run.certified;
        all.stats += run.stats;
    }
    all.stats.seconds = watch.seconds();
    return all;
}

std::string resultToJson(const ShortestPathResult& result, bool includeTiming) {
    nlohmann::ordered_json doc;
    doc["source"] = result.source;
    doc["certified"] = result.certified;
    doc["kReached"] = result.kReached;
    // Wall time is opt-in so that reruns produce byte-identical files.
    doc["stats"] = {{"pathsEvaluated", result.stats.pathsEvaluated},
                    {"prunedCount", result.stats.prunedCount}};
    if (includeTiming) doc["stats"]["wallTimeSeconds"] = result.stats.seconds;
    nlohmann::ordered_json targets = nlohmann::ordered_json::array();
    for (const auto& path : result.best) {
        if (path.nodes.size() == 1 && path.nodes.front() == result.source) continue;
        nlohmann::ordered_json entry;
        entry["target"] = path.nodes.back();
        entry["cost"] = path.cost;
        entry["certified"] = result.certified;
        entry["path"] = path.nodes;
        targets.push_back(std::move(entry));
    }
    doc["targets"] = std::move(targets);
    return doc.dump();
}

}  // namespace matpath
