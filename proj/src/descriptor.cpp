#include "matpath/descriptor.hpp"

#include <algorithm>

#include "matpath/errors.hpp"

namespace matpath {

Eigen::MatrixXd builtinDescriptor(const std::vector<Eigen::Vector3d>& vertices, int bins) {
    const auto count = static_cast<Eigen::Index>(vertices.size());
    if (count < 2) throw ValidationError("descriptor needs at least 2 vertices");
    if (bins < 1) throw ValidationError("descriptor needs at least 1 bin");

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& v : vertices) centroid += v;
    centroid /= static_cast<double>(count);

    double radius = 0.0;
    for (const auto& v : vertices) radius = std::max(radius, (v - centroid).norm());
    if (radius <= 0.0) radius = 1.0;  // all vertices coincide; any scale works

    std::vector<Eigen::Vector3d> scaled(vertices.size());
    for (size_t i = 0; i < vertices.size(); ++i) scaled[i] = (vertices[i] - centroid) / radius;

    Eigen::MatrixXd features = Eigen::MatrixXd::Zero(count, bins);
    const double binWidth = 2.0 / bins;
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = 0; j < count; ++j) {
            if (i == j) continue;
            const double d = (scaled[static_cast<size_t>(i)] - scaled[static_cast<size_t>(j)]).norm();
            const auto bin = std::min(static_cast<Eigen::Index>(d / binWidth),
                                      static_cast<Eigen::Index>(bins - 1));
            features(i, bin) += 1.0;
        }
    }
    features /= static_cast<double>(count - 1);  // unit-sum rows
    return features;
}

}  // namespace matpath
