#pragma once

#include <vector>

#include <Eigen/Dense>

namespace matpath {

// Per-cluster descriptor: row r, column c holds the levels(r)-th percentile
// of feature column c over the cluster's vertices. Columns are non-decreasing
// down the rows because the levels are stored in increasing order.
struct PercentileMatrix {
    Eigen::MatrixXd values;  // p x f
    Eigen::VectorXd levels;  // p levels in [0, 100], increasing
};

// The p levels (i + 0.5) / p * 100 for i = 0..p-1: equally spaced, symmetric
// about the median, and distinct from the 0/100 extremes for every p.
Eigen::VectorXd percentileLevels(int p);

// Percentile by linear interpolation between closest ranks: for m sorted
// values the level q picks rank h = q / 100 * (m - 1) and blends the two
// neighboring order statistics by the fractional part of h.
double percentileOfSorted(const std::vector<double>& sorted, double level);

PercentileMatrix percentileStats(const Eigen::MatrixXd& features,
                                 const std::vector<int>& vertexIds,
                                 const Eigen::VectorXd& levels);

// Frobenius norm of the difference; both descriptors must share the same
// shape and the same percentile levels.
double clusterDistance(const PercentileMatrix& a, const PercentileMatrix& b);

}  // namespace matpath
