#pragma once

#include <Eigen/Dense>

namespace matpath {

// Square non-negative matrix attached to a graph edge. The standard instance
// is doubly stochastic: every row and column sums to one from entries in
// [0, 1]. The 1x1 scalar instance carries a plain non-negative weight and is
// exempt from the sum constraint.
class EdgeMatrix {
public:
    static constexpr double kEntryTol = 1e-9;  // entry range slack
    static constexpr double kSumTol = 1e-6;    // row/column sum slack

    // Validates entries in [0, 1] (within kEntryTol) and unit row/column sums
    // (within kSumTol). The matrix is stored as given.
    static EdgeMatrix doublyStochastic(Eigen::MatrixXd m);

    // 1x1 matrix holding a non-negative scalar weight.
    static EdgeMatrix scalar(double value);

    static EdgeMatrix identity(Eigen::Index n);

    // Wraps a matrix that is valid by construction, e.g. a product of doubly
    // stochastic factors. No checks.
    static EdgeMatrix unchecked(Eigen::MatrixXd m);

    Eigen::Index dim() const { return mat_.rows(); }
    const Eigen::MatrixXd& entries() const { return mat_; }
    EdgeMatrix transposed() const { return EdgeMatrix(mat_.transpose()); }

    // True when the stored matrix satisfies the doubly stochastic tolerances.
    bool isDoublyStochastic(double entryTol = kEntryTol, double sumTol = kSumTol) const;

private:
    explicit EdgeMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {}

    Eigen::MatrixXd mat_;
};

// Matrix product a * b. Both factors must share one dimension; doubly
// stochastic factors yield a doubly stochastic product.
EdgeMatrix compose(const EdgeMatrix& a, const EdgeMatrix& b);

// Total entropy -sum_ij m_ij ln m_ij with the 0 * ln 0 = 0 convention.
// Entries below -EdgeMatrix::kEntryTol are rejected; negatives within the
// tolerance count as zero. Non-negative for entries in [0, 1], zero exactly
// for 0/1 matrices (identity, permutations).
double totalEntropy(const Eigen::MatrixXd& m);
double totalEntropy(const EdgeMatrix& m);

}  // namespace matpath
