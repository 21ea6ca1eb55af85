#pragma once

#include <cstdint>
#include <random>

#include "matpath/graph.hpp"

namespace matpath {

// Uniform double in [0, 1) from the top 53 bits of the engine output;
// identical on every platform, unlike the standard distributions.
inline double uniformDouble(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound). bound must be positive.
inline int uniformInt(std::mt19937_64& rng, int bound) {
    const int v = static_cast<int>(uniformDouble(rng) * bound);
    return v >= bound ? bound - 1 : v;
}

// Random n x n permutation matrix.
Eigen::MatrixXd randomPermutationMatrix(Eigen::Index n, std::mt19937_64& rng);

enum class MatrixEnsemble {
    iidUniform,        // kernel entries 0.05 + U[0,1); fuzzy matrices
    permutationNoise,  // permutation plus eta * U[0,1); sharpness varies with eta
};

// Doubly stochastic matrix obtained by running the ensemble's positive kernel
// through marginal normalization. eta only matters for permutationNoise.
EdgeMatrix randomDoublyStochastic(Eigen::Index n, std::mt19937_64& rng,
                                  MatrixEnsemble ensemble = MatrixEnsemble::iidUniform,
                                  double eta = 0.2);

// Complete graph with nodes "n00", "n01", ... and one random doubly
// stochastic matrix per unordered pair. For permutationNoise each edge draws
// its own eta log-uniformly from [etaLo, etaHi], mixing sharp and fuzzy edges.
MatrixGraph randomGraph(int nodeCount, Eigen::Index dim, std::uint64_t seed,
                        MatrixEnsemble ensemble = MatrixEnsemble::iidUniform, double etaLo = 0.02,
                        double etaHi = 5.0);

// Complete graph with scalar weights drawn uniformly from (0, 10].
MatrixGraph randomScalarGraph(int nodeCount, std::uint64_t seed);

// Node ids "n00", "n01", ... zero-padded so lexicographic order matches
// index order.
std::vector<std::string> sequentialNodeIds(int count);

}  // namespace matpath
