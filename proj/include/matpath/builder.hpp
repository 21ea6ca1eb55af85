#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "matpath/graph.hpp"
#include "matpath/kmeans.hpp"
#include "matpath/percentiles.hpp"

namespace matpath {

// One shape of a collection: geometry plus a V x f per-vertex feature matrix.
// When `features` is empty the builtin distance-histogram descriptor fills in.
struct ShapeRecord {
    std::string id;
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;  // optional, 0-based triangles
    Eigen::MatrixXd features;
};

struct BuilderConfig {
    int n = 28;                    // clusters per shape, the edge matrix dimension
    int p = 100;                   // percentile levels per descriptor
    double sigma = 2.0;            // Gaussian kernel bandwidth on raw distances
    double sinkhornTol = 1e-8;     // max marginal deviation accepted
    int sinkhornMaxIter = 10000;   // normalization sweep cap
    std::uint64_t kmeansSeed = 0;  // base seed for all clustering
    int kmeansRestarts = 10;       // clustering attempts per shape
};

// JSON config file mirroring the field names; missing keys keep defaults,
// unknown keys are rejected.
BuilderConfig builderConfigFromJson(const std::string& text);
std::string builderConfigToJson(const BuilderConfig& config);
BuilderConfig loadBuilderConfig(const std::filesystem::path& file);

// exp(-d^2 / sigma^2), in (0, 1] for finite d.
double gaussianSimilarity(double d, double sigma);

// Clustering plus per-cluster percentile descriptors for one shape.
struct ShapeClusters {
    ClusterModel model;
    std::vector<PercentileMatrix> stats;  // indexed by cluster
};
ShapeClusters clusterShape(const Eigen::MatrixXd& features, const BuilderConfig& config);

// Full pipeline: per-shape clustering, per-pair kernelized descriptor
// distances, marginal normalization, complete graph assembly. Each shape is
// clustered exactly once; the reverse edge of a pair is the transpose.
MatrixGraph buildGraph(const std::vector<ShapeRecord>& shapes, const BuilderConfig& config,
                       unsigned threads = 1);

// Distribution of the n^2 cluster distances over all shape pairs; a sigma of
// the same order as the median puts the kernel in its sensitive range.
struct DistanceStats {
    double min = 0.0;
    double quartile1 = 0.0;
    double median = 0.0;
    double quartile3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
};
DistanceStats clusterDistanceStats(const std::vector<ShapeRecord>& shapes,
                                   const BuilderConfig& config, unsigned threads = 1);

}  // namespace matpath
