#pragma once

#include <Eigen/Dense>

#include "matpath/edge_matrix.hpp"

namespace matpath {

struct SinkhornOptions {
    double tol = 1e-8;     // max |marginal - 1| accepted
    int maxIter = 10000;   // full row+column sweeps
};

// Alternating row-then-column normalization of a strictly positive square
// matrix until both marginal deviations drop to tol. Every sweep ends on a
// column pass, so converged entries lie in [0, 1]. Throws ConvergenceError
// carrying the residual when maxIter sweeps are not enough; throws
// ValidationError for non-square or non-positive input.
EdgeMatrix sinkhornNormalize(const Eigen::MatrixXd& m, const SinkhornOptions& options = {});

}  // namespace matpath
