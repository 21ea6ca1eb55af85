#pragma once

#include <vector>

#include <Eigen/Dense>

namespace matpath {

// Simple rotation- and scale-invariant per-vertex descriptor: the unit-sum
// histogram of Euclidean distances from each vertex to all others, computed
// after centering at the centroid and scaling by the bounding-sphere radius
// (so all distances fall in [0, 2] and the bins cover exactly that range).
// A stand-in for externally computed surface descriptors; one row per vertex.
Eigen::MatrixXd builtinDescriptor(const std::vector<Eigen::Vector3d>& vertices, int bins = 32);

}  // namespace matpath
