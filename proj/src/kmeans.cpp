#include "matpath/kmeans.hpp"

#include <limits>
#include <random>
#include <sstream>

#include "matpath/errors.hpp"
#include "matpath/random_graph.hpp"

namespace matpath {

namespace {

// Squared distance from every point to its nearest chosen center so far.
void refreshNearest(const Eigen::MatrixXd& points, const Eigen::RowVectorXd& center,
                    Eigen::VectorXd& nearestSq) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const double d = (points.row(i) - center).squaredNorm();
        if (d < nearestSq(i)) nearestSq(i) = d;
    }
}

Eigen::MatrixXd seedCenters(const Eigen::MatrixXd& points, int n, std::mt19937_64& rng) {
    const Eigen::Index count = points.rows();
    Eigen::MatrixXd centers(n, points.cols());
    centers.row(0) = points.row(uniformInt(rng, static_cast<int>(count)));
    Eigen::VectorXd nearestSq =
        Eigen::VectorXd::Constant(count, std::numeric_limits<double>::infinity());
    for (int c = 1; c < n; ++c) {
        refreshNearest(points, centers.row(c - 1), nearestSq);
        const double total = nearestSq.sum();
        if (total <= 0.0) {
            // All points coincide with chosen centers; any pick works.
            centers.row(c) = points.row(uniformInt(rng, static_cast<int>(count)));
            continue;
        }
        double r = uniformDouble(rng) * total;
        Eigen::Index pick = count - 1;
        for (Eigen::Index i = 0; i < count; ++i) {
            r -= nearestSq(i);
            if (r <= 0.0) {
                pick = i;
                break;
            }
        }
        centers.row(c) = points.row(pick);
    }
    return centers;
}

ClusterModel lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers, int maxIter) {
    const Eigen::Index count = points.rows();
    const int n = static_cast<int>(centers.rows());
    std::vector<int> assignment(static_cast<size_t>(count), -1);
    std::vector<int> sizes(static_cast<size_t>(n), 0);

    for (int iter = 0; iter < maxIter; ++iter) {
        bool changed = false;
        std::fill(sizes.begin(), sizes.end(), 0);
        for (Eigen::Index i = 0; i < count; ++i) {
            int best = 0;
            double bestD = (points.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < n; ++c) {
                const double d = (points.row(i) - centers.row(c)).squaredNorm();
                if (d < bestD) {
                    bestD = d;
                    best = c;
                }
            }
            if (assignment[static_cast<size_t>(i)] != best) {
                assignment[static_cast<size_t>(i)] = best;
                changed = true;
            }
            ++sizes[static_cast<size_t>(best)];
        }

        // Re-seat empty clusters before the mean update: each takes the worst
        // outlier of the currently largest cluster.
        for (int c = 0; c < n; ++c) {
            while (sizes[static_cast<size_t>(c)] == 0) {
                int donor = 0;
                for (int d = 1; d < n; ++d) {
                    if (sizes[static_cast<size_t>(d)] > sizes[static_cast<size_t>(donor)]) donor = d;
                }
                Eigen::Index worst = -1;
                double worstD = -1.0;
                for (Eigen::Index i = 0; i < count; ++i) {
                    if (assignment[static_cast<size_t>(i)] != donor) continue;
                    const double d = (points.row(i) - centers.row(donor)).squaredNorm();
                    if (d > worstD) {
                        worstD = d;
                        worst = i;
                    }
                }
                assignment[static_cast<size_t>(worst)] = c;
                --sizes[static_cast<size_t>(donor)];
                ++sizes[static_cast<size_t>(c)];
                changed = true;
            }
        }

        centers.setZero();
        for (Eigen::Index i = 0; i < count; ++i) {
            centers.row(assignment[static_cast<size_t>(i)]) += points.row(i);
        }
        for (int c = 0; c < n; ++c) centers.row(c) /= sizes[static_cast<size_t>(c)];

        if (!changed) break;
    }

    ClusterModel model;
    model.assignments = std::move(assignment);
    model.centroids = std::move(centers);
    model.inertia = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
        model.inertia +=
            (points.row(i) - model.centroids.row(model.assignments[static_cast<size_t>(i)]))
                .squaredNorm();
    }
    return model;
}

}  // namespace

ClusterModel kmeansCluster(const Eigen::MatrixXd& features, int n, std::uint64_t seed,
                           int restarts) {
    if (n < 1) throw ValidationError("cluster count must be at least 1");
    if (restarts < 1) throw ValidationError("restarts must be at least 1");
    if (features.rows() < n) {
        std::ostringstream msg;
        msg << "cannot form " << n << " clusters from " << features.rows() << " points";
        throw InfeasibleError(msg.str());
    }
    if (!features.allFinite()) throw ValidationError("features contain NaN or Inf");

    std::mt19937_64 rng(seed);
    ClusterModel best;
    bool have = false;
    for (int attempt = 0; attempt < restarts; ++attempt) {
        ClusterModel model = lloyd(features, seedCenters(features, n, rng), 300);
        if (!have || model.inertia < best.inertia) {
            best = std::move(model);
            have = true;
        }
    }
    return best;
}

}  // namespace matpath
