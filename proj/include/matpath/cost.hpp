#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "matpath/edge_matrix.hpp"

namespace matpath {

// Path cost expressed through the composed edge matrix, bundled with the
// composition rule and its identity element. Implementations must satisfy
// evaluate(m) >= 0, evaluate(identity(n)) == 0, and monotonicity under
// composition: evaluate(compose(m, x)) >= evaluate(m). Monotonicity is what
// makes prefix costs usable as pruning bounds.
class CostFunction {
public:
    virtual ~CostFunction() = default;

    virtual double evaluate(const Eigen::MatrixXd& m) const = 0;
    double evaluate(const EdgeMatrix& m) const { return evaluate(m.entries()); }

    // Writes compose(a, b) into dst. dst must not alias a or b.
    virtual void composeInto(Eigen::MatrixXd& dst, const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) const = 0;
    EdgeMatrix compose(const EdgeMatrix& a, const EdgeMatrix& b) const;

    virtual EdgeMatrix identity(Eigen::Index n) const = 0;

    // True when a path and its reverse cost the same on transpose-symmetric
    // graphs; all-pairs solves then derive one direction from the other.
    virtual bool transposeSymmetric() const { return false; }

    virtual std::string_view name() const = 0;
};

// Total entropy of the composed doubly stochastic matrix, composition by
// matrix product.
class TotalEntropyCost final : public CostFunction {
public:
    using CostFunction::evaluate;
    double evaluate(const Eigen::MatrixXd& m) const override { return totalEntropy(m); }
    void composeInto(Eigen::MatrixXd& dst, const Eigen::MatrixXd& a,
                     const Eigen::MatrixXd& b) const override;
    EdgeMatrix identity(Eigen::Index n) const override { return EdgeMatrix::identity(n); }
    bool transposeSymmetric() const override { return true; }
    std::string_view name() const override { return "total-entropy"; }
};

// 1x1 scalar weights composed by addition; reduces the engine to classic
// additive shortest paths for cross-checks against textbook algorithms.
class AdditiveScalarCost final : public CostFunction {
public:
    using CostFunction::evaluate;
    double evaluate(const Eigen::MatrixXd& m) const override;
    void composeInto(Eigen::MatrixXd& dst, const Eigen::MatrixXd& a,
                     const Eigen::MatrixXd& b) const override;
    EdgeMatrix identity(Eigen::Index n) const override;
    bool transposeSymmetric() const override { return true; }
    std::string_view name() const override { return "additive-scalar"; }
};

std::shared_ptr<const CostFunction> totalEntropyCost();
std::shared_ptr<const CostFunction> additiveScalarCost();

// Worst margin evaluate(compose(a, b)) - evaluate(a) over the sample pairs.
// A margin clearly below zero means the cost violates monotonicity and the
// solver's pruning bounds do not hold for it.
double monotonicityMargin(const CostFunction& cost,
                          const std::vector<std::pair<EdgeMatrix, EdgeMatrix>>& pairs);

}  // namespace matpath
