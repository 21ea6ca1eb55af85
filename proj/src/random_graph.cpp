#include "matpath/random_graph.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "matpath/errors.hpp"
#include "matpath/sinkhorn.hpp"

namespace matpath {

Eigen::MatrixXd randomPermutationMatrix(Eigen::Index n, std::mt19937_64& rng) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = static_cast<int>(n) - 1; i > 0; --i) {
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(uniformInt(rng, i + 1))]);
    }
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) p(i, perm[static_cast<size_t>(i)]) = 1.0;
    return p;
}

EdgeMatrix randomDoublyStochastic(Eigen::Index n, std::mt19937_64& rng, MatrixEnsemble ensemble,
                                  double eta) {
    if (n < 1) throw ValidationError("matrix dimension must be positive");
    if (n == 1) return EdgeMatrix::doublyStochastic(Eigen::MatrixXd::Ones(1, 1));
    Eigen::MatrixXd kernel(n, n);
    switch (ensemble) {
        case MatrixEnsemble::iidUniform:
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) kernel(i, j) = 0.05 + uniformDouble(rng);
            break;
        case MatrixEnsemble::permutationNoise: {
            kernel = randomPermutationMatrix(n, rng);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) kernel(i, j) += eta * (1e-6 + uniformDouble(rng));
            break;
        }
    }
    return sinkhornNormalize(kernel);
}

std::vector<std::string> sequentialNodeIds(int count) {
    int width = 2;
    for (int v = count - 1; v >= 100; v /= 10) ++width;
    std::vector<std::string> ids;
    ids.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::ostringstream id;
        id << "n" << std::setw(width) << std::setfill('0') << i;
        ids.push_back(id.str());
    }
    return ids;
}

MatrixGraph randomGraph(int nodeCount, Eigen::Index dim, std::uint64_t seed,
                        MatrixEnsemble ensemble, double etaLo, double etaHi) {
    if (nodeCount < 2) throw ValidationError("random graph needs at least 2 nodes");
    std::mt19937_64 rng(seed);
    const auto ids = sequentialNodeIds(nodeCount);
    std::map<std::pair<std::string, std::string>, EdgeMatrix> edges;
    const double logLo = std::log(etaLo);
    const double logHi = std::log(etaHi);
    for (int i = 0; i < nodeCount; ++i) {
        for (int j = i + 1; j < nodeCount; ++j) {
            double eta = 0.0;
            if (ensemble == MatrixEnsemble::permutationNoise) {
                eta = std::exp(logLo + (logHi - logLo) * uniformDouble(rng));
            }
            edges.emplace(std::make_pair(ids[static_cast<size_t>(i)], ids[static_cast<size_t>(j)]),
                          randomDoublyStochastic(dim, rng, ensemble, eta));
        }
    }
    return MatrixGraph::fromPairEdges(ids, edges);
}

MatrixGraph randomScalarGraph(int nodeCount, std::uint64_t seed) {
    if (nodeCount < 2) throw ValidationError("random graph needs at least 2 nodes");
    std::mt19937_64 rng(seed);
    const auto ids = sequentialNodeIds(nodeCount);
    std::map<std::pair<std::string, std::string>, EdgeMatrix> edges;
    for (int i = 0; i < nodeCount; ++i) {
        for (int j = i + 1; j < nodeCount; ++j) {
            const double w = 10.0 * (1.0 - uniformDouble(rng));  // in (0, 10]
            edges.emplace(std::make_pair(ids[static_cast<size_t>(i)], ids[static_cast<size_t>(j)]),
                          EdgeMatrix::scalar(w));
        }
    }
    return MatrixGraph::fromPairEdges(ids, edges);
}

}  // namespace matpath
