#include "matpath/sinkhorn.hpp"

#include <cassert>
#include <limits>
#include <sstream>

#include "matpath/errors.hpp"

namespace matpath {

namespace {

double marginalResidual(const Eigen::MatrixXd& m) {
    const double rowDev = (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double colDev = (m.colwise().sum().array() - 1.0).abs().maxCoeff();
    return std::max(rowDev, colDev);
}

}  // namespace

EdgeMatrix sinkhornNormalize(const Eigen::MatrixXd& input, const SinkhornOptions& options) {
    if (input.rows() == 0 || input.rows() != input.cols()) {
        std::ostringstream msg;
        msg << "sinkhorn input must be square and non-empty, got " << input.rows() << "x"
            << input.cols();
        throw ValidationError(msg.str());
    }
    if (!(input.minCoeff() > 0.0)) {
        std::ostringstream msg;
        msg << "sinkhorn input must be strictly positive, min entry " << input.minCoeff();
        throw ValidationError(msg.str());
    }
    if (!(options.tol > 0.0) || options.maxIter < 1) {
        throw ValidationError("sinkhorn options need tol > 0 and maxIter >= 1");
    }
    if (options.tol > EdgeMatrix::kSumTol) {
        std::ostringstream msg;
        msg << "sinkhorn tol " << options.tol << " is looser than the edge matrix sum tolerance "
            << EdgeMatrix::kSumTol;
        throw ValidationError(msg.str());
    }

    Eigen::MatrixXd m = input;
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < options.maxIter; ++iter) {
        m.array().colwise() /= m.rowwise().sum().array();
        m.array().rowwise() /= m.colwise().sum().array();
        const double residual = marginalResidual(m);
        // The deviation shrinks across full sweeps; a tiny slack absorbs
        // floating-point noise near convergence.
        assert(residual <= previous * (1.0 + 1e-9) + 1e-12);
        previous = residual;
        if (residual <= options.tol) {
            return EdgeMatrix::doublyStochastic(std::move(m));
        }
    }
    std::ostringstream msg;
    msg << "sinkhorn did not converge in " << options.maxIter << " sweeps, residual " << previous
        << " > tol " << options.tol;
    throw ConvergenceError(msg.str());
}

}  // namespace matpath
