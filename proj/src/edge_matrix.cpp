#include "matpath/edge_matrix.hpp"

#include <sstream>

#include "matpath/errors.hpp"

namespace matpath {

namespace {

void requireSquare(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << "matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
        throw ValidationError(msg.str());
    }
}

}  // namespace

EdgeMatrix EdgeMatrix::doublyStochastic(Eigen::MatrixXd m) {
    requireSquare(m);
    EdgeMatrix e(std::move(m));
    if (!e.isDoublyStochastic()) {
        const auto& a = e.entries();
        std::ostringstream msg;
        msg << "matrix is not doubly stochastic: entry range [" << a.minCoeff() << ", "
            << a.maxCoeff() << "], max |row sum - 1| = "
            << (a.rowwise().sum().array() - 1.0).abs().maxCoeff() << ", max |col sum - 1| = "
            << (a.colwise().sum().array() - 1.0).abs().maxCoeff();
        throw ValidationError(msg.str());
    }
    return e;
}

EdgeMatrix EdgeMatrix::scalar(double value) {
    if (!(value >= 0.0)) {
        std::ostringstream msg;
        msg << "scalar edge weight must be non-negative, got " << value;
        throw ValidationError(msg.str());
    }
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = value;
    return EdgeMatrix(std::move(m));
}

EdgeMatrix EdgeMatrix::identity(Eigen::Index n) {
    if (n < 1) throw ValidationError("identity dimension must be positive");
    return EdgeMatrix(Eigen::MatrixXd::Identity(n, n));
}

EdgeMatrix EdgeMatrix::unchecked(Eigen::MatrixXd m) {
    requireSquare(m);
    return EdgeMatrix(std::move(m));
}

bool EdgeMatrix::isDoublyStochastic(double entryTol, double sumTol) const {
    if (mat_.minCoeff() < -entryTol || mat_.maxCoeff() > 1.0 + entryTol) return false;
    if ((mat_.rowwise().sum().array() - 1.0).abs().maxCoeff() > sumTol) return false;
    if ((mat_.colwise().sum().array() - 1.0).abs().maxCoeff() > sumTol) return false;
    return true;
}

EdgeMatrix compose(const EdgeMatrix& a, const EdgeMatrix& b) {
    if (a.dim() != b.dim()) {
        std::ostringstream msg;
        msg << "dimension mismatch in composition: " << a.dim() << " vs " << b.dim();
        throw ValidationError(msg.str());
    }
    return EdgeMatrix::unchecked(a.entries() * b.entries());
}

double totalEntropy(const Eigen::MatrixXd& m) {
    const double lo = m.minCoeff();
    if (lo < -EdgeMatrix::kEntryTol) {
        std::ostringstream msg;
        msg << "entropy undefined for negative entries: min entry " << lo;
        throw ValidationError(msg.str());
    }
    // max(x, 0) treats tolerated negatives as zero; the tiny floor inside the
    // log keeps 0 * ln 0 = 0 without branching per entry.
    const auto x = m.array().cwiseMax(0.0);
    return -(x * x.cwiseMax(1e-300).log()).sum();
}

double totalEntropy(const EdgeMatrix& m) { return totalEntropy(m.entries()); }

}  // namespace matpath
