#include "matpath/cost.hpp"

#include <limits>
#include <sstream>

#include "matpath/errors.hpp"

namespace matpath {

namespace {

void requireSameDim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << "dimension mismatch in composition: " << a.rows() << " vs " << b.rows();
        throw ValidationError(msg.str());
    }
}

void requireScalarDim(const Eigen::MatrixXd& m) {
    if (m.rows() != 1 || m.cols() != 1) {
        std::ostringstream msg;
        msg << "additive-scalar cost needs 1x1 matrices, got " << m.rows() << "x" << m.cols();
        throw ValidationError(msg.str());
    }
}

}  // namespace

EdgeMatrix CostFunction::compose(const EdgeMatrix& a, const EdgeMatrix& b) const {
    Eigen::MatrixXd dst;
    composeInto(dst, a.entries(), b.entries());
    return EdgeMatrix::unchecked(std::move(dst));
}

void TotalEntropyCost::composeInto(Eigen::MatrixXd& dst, const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b) const {
    requireSameDim(a, b);
    dst.noalias() = a * b;
}

double AdditiveScalarCost::evaluate(const Eigen::MatrixXd& m) const {
    requireScalarDim(m);
    return m(0, 0);
}

void AdditiveScalarCost::composeInto(Eigen::MatrixXd& dst, const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b) const {
    requireScalarDim(a);
    requireScalarDim(b);
    dst.resize(1, 1);
    dst(0, 0) = a(0, 0) + b(0, 0);
}

EdgeMatrix AdditiveScalarCost::identity(Eigen::Index n) const {
    if (n != 1) {
        std::ostringstream msg;
        msg << "additive-scalar identity is 1x1, requested dimension " << n;
        throw ValidationError(msg.str());
    }
    return EdgeMatrix::scalar(0.0);
}

std::shared_ptr<const CostFunction> totalEntropyCost() {
    static const auto instance = std::make_shared<const TotalEntropyCost>();
    return instance;
}

std::shared_ptr<const CostFunction> additiveScalarCost() {
    static const auto instance = std::make_shared<const AdditiveScalarCost>();
    return instance;
}

double monotonicityMargin(const CostFunction& cost,
                          const std::vector<std::pair<EdgeMatrix, EdgeMatrix>>& pairs) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : pairs) {
        const EdgeMatrix ab = cost.compose(a, b);
        worst = std::min(worst, cost.evaluate(ab) - cost.evaluate(a));
    }
    return worst;
}

}  // namespace matpath
