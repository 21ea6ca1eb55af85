#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace matpath {

struct ClusterModel {
    std::vector<int> assignments;  // vertex -> cluster index in [0, clusterCount)
    Eigen::MatrixXd centroids;     // one row per cluster
    double inertia = 0.0;          // within-cluster sum of squared distances

    int clusterCount() const { return static_cast<int>(centroids.rows()); }
};

// Lloyd's clustering with k-means++ seeding; rows of `features` are the
// points. Runs `restarts` independent seeded attempts and keeps the one with
// the smallest within-cluster sum of squares. Every cluster in the result is
// non-empty: a cluster that empties during an update steals the point
// farthest from its own centroid out of the currently largest cluster.
// Deterministic for a fixed seed, independent of thread count.
ClusterModel kmeansCluster(const Eigen::MatrixXd& features, int n, std::uint64_t seed,
                           int restarts = 10);

}  // namespace matpath
