#include "matpath/builder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "matpath/descriptor.hpp"
#include "matpath/errors.hpp"
#include "matpath/parallel.hpp"
#include "matpath/sinkhorn.hpp"

namespace matpath {

namespace {

void validate(const BuilderConfig& config) {
    if (config.n < 2) throw ValidationError("builder needs at least 2 clusters");
    if (config.p < 1) throw ValidationError("builder needs at least 1 percentile level");
    if (config.sigma <= 0.0) throw ValidationError("sigma must be positive");
    if (config.sinkhornTol <= 0.0) throw ValidationError("sinkhornTol must be positive");
    if (config.sinkhornMaxIter < 1) throw ValidationError("sinkhornMaxIter must be at least 1");
    if (config.kmeansRestarts < 1) throw ValidationError("kmeansRestarts must be at least 1");
}

// Features as given, or the builtin descriptor when the record carries none.
Eigen::MatrixXd resolveFeatures(const ShapeRecord& shape) {
    if (shape.features.size() == 0) {
        if (shape.vertices.empty()) {
            throw ValidationError("shape " + shape.id + " has neither features nor vertices");
        }
        return builtinDescriptor(shape.vertices);
    }
    if (!shape.vertices.empty() &&
        shape.features.rows() != static_cast<Eigen::Index>(shape.vertices.size())) {
        std::ostringstream msg;
        msg << "shape " << shape.id << ": " << shape.features.rows() << " feature rows for "
            << shape.vertices.size() << " vertices";
        throw ValidationError(msg.str());
    }
    if (!shape.features.allFinite()) {
        throw ValidationError("shape " + shape.id + ": features contain NaN or Inf");
    }
    return shape.features;
}

std::vector<std::string> checkedIds(const std::vector<ShapeRecord>& shapes) {
    if (shapes.size() < 2) throw ValidationError("builder needs at least 2 shapes");
    std::vector<std::string> ids;
    ids.reserve(shapes.size());
    for (const auto& shape : shapes) {
        if (shape.id.empty()) throw ValidationError("shape ids must be non-empty");
        ids.push_back(shape.id);
    }
    return ids;
}

// Clusters every shape once, in parallel, with errors tagged by shape id.
std::vector<ShapeClusters> clusterAll(const std::vector<ShapeRecord>& shapes,
                                      const BuilderConfig& config, unsigned threads) {
    std::vector<Eigen::MatrixXd> features(shapes.size());
    for (size_t i = 0; i < shapes.size(); ++i) {
        features[i] = resolveFeatures(shapes[i]);
        if (features[i].cols() != features[0].cols()) {
            std::ostringstream msg;
            msg << "shape " << shapes[i].id << " has " << features[i].cols()
                << " feature columns, expected " << features[0].cols();
            throw ValidationError(msg.str());
        }
    }
    std::vector<ShapeClusters> clusters(shapes.size());
    parallelFor(static_cast<int>(shapes.size()), threads, [&](int i) {
        try {
            clusters[static_cast<size_t>(i)] = clusterShape(features[static_cast<size_t>(i)], config);
        } catch (const InfeasibleError& e) {
            throw InfeasibleError("shape " + shapes[static_cast<size_t>(i)].id + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("shape " + shapes[static_cast<size_t>(i)].id + ": " + e.what());
        }
    });
    return clusters;
}

Eigen::MatrixXd pairDistances(const ShapeClusters& x, const ShapeClusters& y, int n) {
    Eigen::MatrixXd d(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            d(a, b) = clusterDistance(x.stats[static_cast<size_t>(a)],
                                      y.stats[static_cast<size_t>(b)]);
        }
    }
    return d;
}

}  // namespace

double gaussianSimilarity(double d, double sigma) {
    if (sigma <= 0.0) throw ValidationError("sigma must be positive");
    return std::exp(-(d * d) / (sigma * sigma));
}

ShapeClusters clusterShape(const Eigen::MatrixXd& features, const BuilderConfig& config) {
    validate(config);
    ShapeClusters out;
    out.model = kmeansCluster(features, config.n, config.kmeansSeed, config.kmeansRestarts);
    std::vector<std::vector<int>> members(static_cast<size_t>(config.n));
    for (size_t v = 0; v < out.model.assignments.size(); ++v) {
        members[static_cast<size_t>(out.model.assignments[v])].push_back(static_cast<int>(v));
    }
    const Eigen::VectorXd levels = percentileLevels(config.p);
    out.stats.reserve(static_cast<size_t>(config.n));
    for (int c = 0; c < config.n; ++c) {
        out.stats.push_back(percentileStats(features, members[static_cast<size_t>(c)], levels));
    }
    return out;
}

MatrixGraph buildGraph(const std::vector<ShapeRecord>& shapes, const BuilderConfig& config,
                       unsigned threads) {
    validate(config);
    const auto ids = checkedIds(shapes);
    const auto clusters = clusterAll(shapes, config, threads);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < static_cast<int>(shapes.size()); ++i) {
        for (int j = i + 1; j < static_cast<int>(shapes.size()); ++j) pairs.emplace_back(i, j);
    }
    std::vector<Eigen::MatrixXd> normalized(pairs.size());
    parallelFor(static_cast<int>(pairs.size()), threads, [&](int k) {
        const auto [i, j] = pairs[static_cast<size_t>(k)];
        try {
            const Eigen::MatrixXd d =
                pairDistances(clusters[static_cast<size_t>(i)], clusters[static_cast<size_t>(j)],
                              config.n);
            Eigen::MatrixXd kernel(config.n, config.n);
            for (int a = 0; a < config.n; ++a) {
                for (int b = 0; b < config.n; ++b) {
                    // The kernel is mathematically positive but underflows to
                    // zero for distant clusters; the floor keeps the marginal
                    // normalization's positivity precondition intact.
                    kernel(a, b) = std::max(gaussianSimilarity(d(a, b), config.sigma), 1e-300);
                }
            }
            normalized[static_cast<size_t>(k)] =
                sinkhornNormalize(kernel, {.tol = config.sinkhornTol,
                                           .maxIter = config.sinkhornMaxIter})
                    .entries();
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("edge (" + ids[static_cast<size_t>(i)] + ", " +
                                   ids[static_cast<size_t>(j)] + "): " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("edge (" + ids[static_cast<size_t>(i)] + ", " +
                                  ids[static_cast<size_t>(j)] + "): " + e.what());
        }
    });

    std::map<std::pair<std::string, std::string>, EdgeMatrix> edges;
    for (size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        edges.emplace(std::make_pair(ids[static_cast<size_t>(i)], ids[static_cast<size_t>(j)]),
                      EdgeMatrix::doublyStochastic(std::move(normalized[k])));
    }
    return MatrixGraph::fromPairEdges(ids, edges);
}

DistanceStats clusterDistanceStats(const std::vector<ShapeRecord>& shapes,
                                   const BuilderConfig& config, unsigned threads) {
    validate(config);
    checkedIds(shapes);
    const auto clusters = clusterAll(shapes, config, threads);

    std::vector<double> all;
    for (size_t i = 0; i < shapes.size(); ++i) {
        for (size_t j = i + 1; j < shapes.size(); ++j) {
            const Eigen::MatrixXd d = pairDistances(clusters[i], clusters[j], config.n);
            for (int a = 0; a < config.n; ++a) {
                for (int b = 0; b < config.n; ++b) all.push_back(d(a, b));
            }
        }
    }
    std::sort(all.begin(), all.end());
    DistanceStats stats;
    stats.min = all.front();
    stats.quartile1 = percentileOfSorted(all, 25.0);
    stats.median = percentileOfSorted(all, 50.0);
    stats.quartile3 = percentileOfSorted(all, 75.0);
    stats.max = all.back();
    stats.mean = 0.0;
    for (const double d : all) stats.mean += d;
    stats.mean /= static_cast<double>(all.size());
    return stats;
}

BuilderConfig builderConfigFromJson(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad builder config: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("builder config must be a JSON object");
    BuilderConfig config;
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "n") {
                config.n = value.get<int>();
            } else if (key == "p") {
                config.p = value.get<int>();
            } else if (key == "sigma") {
                config.sigma = value.get<double>();
            } else if (key == "sinkhornTol") {
                config.sinkhornTol = value.get<double>();
            } else if (key == "sinkhornMaxIter") {
                config.sinkhornMaxIter = value.get<int>();
            } else if (key == "kmeansSeed") {
                config.kmeansSeed = value.get<std::uint64_t>();
            } else if (key == "kmeansRestarts") {
                config.kmeansRestarts = value.get<int>();
            } else {
                throw ValidationError("unknown builder config key: " + key);
            }
        } catch (const nlohmann::json::exception&) {
            throw ValidationError("bad builder config value for key: " + key);
        }
    }
    validate(config);
    return config;
}

std::string builderConfigToJson(const BuilderConfig& config) {
    nlohmann::ordered_json doc;
    doc["n"] = config.n;
    doc["p"] = config.p;
    doc["sigma"] = config.sigma;
    doc["sinkhornTol"] = config.sinkhornTol;
    doc["sinkhornMaxIter"] = config.sinkhornMaxIter;
    doc["kmeansSeed"] = config.kmeansSeed;
    doc["kmeansRestarts"] = config.kmeansRestarts;
    return doc.dump(2) + "\n";
}

BuilderConfig loadBuilderConfig(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open config file: " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return builderConfigFromJson(buffer.str());
}

}  // namespace matpath
