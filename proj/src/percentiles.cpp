#include "matpath/percentiles.hpp"

#include <algorithm>
#include <cmath>

#include "matpath/errors.hpp"

namespace matpath {

Eigen::VectorXd percentileLevels(int p) {
    if (p < 1) throw ValidationError("percentile count must be at least 1");
    Eigen::VectorXd levels(p);
    for (int i = 0; i < p; ++i) levels(i) = (i + 0.5) / p * 100.0;
    return levels;
}

double percentileOfSorted(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) throw ValidationError("percentile of an empty sample");
    if (level < 0.0 || level > 100.0) throw ValidationError("percentile level outside [0, 100]");
    const double h = level / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<size_t>(std::floor(h));
    const auto hi = static_cast<size_t>(std::ceil(h));
    if (lo == hi) return sorted[lo];
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

PercentileMatrix percentileStats(const Eigen::MatrixXd& features,
                                 const std::vector<int>& vertexIds,
                                 const Eigen::VectorXd& levels) {
    if (vertexIds.empty()) throw ValidationError("percentile stats of an empty cluster");
    for (const int v : vertexIds) {
        if (v < 0 || v >= features.rows()) throw ValidationError("cluster vertex out of range");
    }
    PercentileMatrix out;
    out.levels = levels;
    out.values.resize(levels.size(), features.cols());
    std::vector<double> column(vertexIds.size());
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        for (size_t i = 0; i < vertexIds.size(); ++i) {
            column[i] = features(vertexIds[i], c);
        }
        std::sort(column.begin(), column.end());
        for (Eigen::Index r = 0; r < levels.size(); ++r) {
            out.values(r, c) = percentileOfSorted(column, levels(r));
        }
    }
    return out;
}

double clusterDistance(const PercentileMatrix& a, const PercentileMatrix& b) {
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
        throw ValidationError("percentile matrices differ in shape");
    }
    if (a.levels.size() != b.levels.size() || (a.levels - b.levels).cwiseAbs().maxCoeff() != 0.0) {
        throw ValidationError("percentile matrices use different levels");
    }
    return (a.values - b.values).norm();
}

}  // namespace matpath
