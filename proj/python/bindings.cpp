// Python bindings for the matpath core: graph building, solving, retrieval,
// and morphing. Costs are selected by name ("auto" picks additive weights
// for scalar graphs and total entropy otherwise); geometry crosses the
// boundary as numpy arrays (vertices Nx3 float, faces Nx3 int).

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "matpath/builder.hpp"
#include "matpath/cost.hpp"
#include "matpath/descriptor.hpp"
#include "matpath/errors.hpp"
#include "matpath/graph_json.hpp"
#include "matpath/mesh_io.hpp"
#include "matpath/metric.hpp"
#include "matpath/morph.hpp"
#include "matpath/random_graph.hpp"
#include "matpath/solver.hpp"

namespace py = pybind11;
using namespace matpath;

namespace {

std::vector<Eigen::Vector3d> toPoints(const Eigen::MatrixXd& m) {
    if (m.size() > 0 && m.cols() != 3) throw ValidationError("vertices must be Nx3");
    std::vector<Eigen::Vector3d> points(static_cast<size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) points[static_cast<size_t>(i)] = m.row(i);
    return points;
}

Eigen::MatrixXd fromPoints(const std::vector<Eigen::Vector3d>& points) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), 3);
    for (size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i];
    return m;
}

std::vector<std::array<int, 3>> toFaces(const Eigen::MatrixXi& m) {
    if (m.size() > 0 && m.cols() != 3) throw ValidationError("faces must be Nx3");
    std::vector<std::array<int, 3>> faces(static_cast<size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        faces[static_cast<size_t>(i)] = {m(i, 0), m(i, 1), m(i, 2)};
    }
    return faces;
}

Eigen::MatrixXi fromFaces(const std::vector<std::array<int, 3>>& faces) {
    Eigen::MatrixXi m(static_cast<Eigen::Index>(faces.size()), 3);
    for (size_t i = 0; i < faces.size(); ++i) {
        m.row(static_cast<Eigen::Index>(i)) << faces[i][0], faces[i][1], faces[i][2];
    }
    return m;
}

std::shared_ptr<const CostFunction> resolveCost(const MatrixGraph& graph,
                                                const std::string& name) {
    if (name == "auto") {
        return graph.dim() == 1 ? additiveScalarCost() : totalEntropyCost();
    }
    if (name == "total-entropy") return totalEntropyCost();
    if (name == "additive-scalar") return additiveScalarCost();
    throw ValidationError("unknown cost: " + name + " (use auto, total-entropy, additive-scalar)");
}

SolverConfig makeConfig(const MatrixGraph& graph, std::optional<int> kMax,
                        const std::string& cost, bool recordCandidates = false) {
    SolverConfig config;
    config.cost = resolveCost(graph, cost);
    config.kMax = kMax;
    config.recordCandidates = recordCandidates;
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shortest paths in graphs whose edges carry doubly stochastic matrices";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<ShapeRecord>(m, "Shape")
        .def(py::init([](std::string id, std::optional<Eigen::MatrixXd> vertices,
                         std::optional<Eigen::MatrixXd> features,
                         std::optional<Eigen::MatrixXi> faces) {
                 ShapeRecord shape;
                 shape.id = std::move(id);
                 if (vertices) shape.vertices = toPoints(*vertices);
                 if (features) shape.features = *features;
                 if (faces) shape.faces = toFaces(*faces);
                 return shape;
             }),
             py::arg("id"), py::arg("vertices") = std::nullopt,
             py::arg("features") = std::nullopt, py::arg("faces") = std::nullopt)
        .def_readwrite("id", &ShapeRecord::id)
        .def_property(
            "vertices", [](const ShapeRecord& s) { return fromPoints(s.vertices); },
            [](ShapeRecord& s, const Eigen::MatrixXd& m) { s.vertices = toPoints(m); })
        .def_property(
            "faces", [](const ShapeRecord& s) { return fromFaces(s.faces); },
            [](ShapeRecord& s, const Eigen::MatrixXi& m) { s.faces = toFaces(m); })
        .def_readwrite("features", &ShapeRecord::features)
        .def("__repr__", [](const ShapeRecord& s) {
            return "Shape(id='" + s.id + "', vertices=" + std::to_string(s.vertices.size()) +
                   ")";
        });

    py::class_<BuilderConfig>(m, "BuilderConfig")
        .def(py::init<>())
        .def_readwrite("n", &BuilderConfig::n)
        .def_readwrite("p", &BuilderConfig::p)
        .def_readwrite("sigma", &BuilderConfig::sigma)
        .def_readwrite("sinkhorn_tol", &BuilderConfig::sinkhornTol)
        .def_readwrite("sinkhorn_max_iter", &BuilderConfig::sinkhornMaxIter)
        .def_readwrite("kmeans_seed", &BuilderConfig::kmeansSeed)
        .def_readwrite("kmeans_restarts", &BuilderConfig::kmeansRestarts)
        .def("to_json", &builderConfigToJson)
        .def_static("from_json", &builderConfigFromJson, py::arg("text"));

    py::class_<MatrixGraph>(m, "MatrixGraph")
        .def_property_readonly("nodes", &MatrixGraph::nodes)
        .def_property_readonly("dim", &MatrixGraph::dim)
        .def("node_count", &MatrixGraph::nodeCount)
        .def(
            "edge",
            [](const MatrixGraph& g, const std::string& from, const std::string& to) {
                return g.edge(from, to).entries();
            },
            py::arg("from_node"), py::arg("to_node"))
        .def("to_json", &graphToJson)
        .def_static("from_json", &parseGraphJson, py::arg("text"))
        .def("__repr__", [](const MatrixGraph& g) {
            return "MatrixGraph(nodes=" + std::to_string(g.nodeCount()) +
                   ", dim=" + std::to_string(g.dim()) + ")";
        });
    m.def("load_graph", &loadGraph, py::arg("path"));
    m.def("save_graph", &saveGraph, py::arg("graph"), py::arg("path"));

    py::class_<Path>(m, "Path")
        .def_readonly("nodes", &Path::nodes)
        .def_readonly("cost", &Path::cost)
        .def_property_readonly("composed",
                               [](const Path& p) { return p.composed.entries(); })
        .def("edge_count", &Path::edgeCount)
        .def("__repr__", [](const Path& p) {
            std::string text = "Path(";
            for (size_t i = 0; i < p.nodes.size(); ++i) {
                if (i) text += " -> ";
                text += p.nodes[i];
            }
            return text + ", cost=" + std::to_string(p.cost) + ")";
        });

    py::class_<ShortestPathResult>(m, "SolveResult")
        .def_readonly("source", &ShortestPathResult::source)
        .def_readonly("best", &ShortestPathResult::best)
        .def_readonly("certified", &ShortestPathResult::certified)
        .def_readonly("k_reached", &ShortestPathResult::kReached)
        .def_readonly("candidates", &ShortestPathResult::candidates)
        .def_property_readonly("stats",
                               [](const ShortestPathResult& r) {
                                   py::dict stats;
                                   stats["paths_evaluated"] = r.stats.pathsEvaluated;
                                   stats["edges_explored"] = r.stats.edgesExplored;
                                   stats["pruned_count"] = r.stats.prunedCount;
                                   stats["seconds"] = r.stats.seconds;
                                   return stats;
                               })
        .def("to_json", &resultToJson, py::arg("include_timing") = false);

    m.def(
        "solve_from",
        [](const MatrixGraph& graph, const std::string& source, std::optional<int> kMax,
           const std::string& cost, bool recordCandidates) {
            return shortestPathsFrom(graph, source,
                                     makeConfig(graph, kMax, cost, recordCandidates));
        },
        py::arg("graph"), py::arg("source"), py::arg("k_max") = std::nullopt,
        py::arg("cost") = "auto", py::arg("record_candidates") = false);
    m.def(
        "fixed_k_path",
        [](const MatrixGraph& graph, const std::string& source, const std::string& target,
           int k, const std::string& cost) {
            return fixedKPath(graph, source, target, k, makeConfig(graph, std::nullopt, cost));
        },
        py::arg("graph"), py::arg("source"), py::arg("target"), py::arg("k"),
        py::arg("cost") = "auto");
    m.def(
        "brute_force_oracle",
        [](const MatrixGraph& graph, const std::string& source, const std::string& target,
           std::optional<int> kMax, const std::string& cost) {
            return bruteForceOracle(graph, source, target, makeConfig(graph, kMax, cost));
        },
        py::arg("graph"), py::arg("source"), py::arg("target"),
        py::arg("k_max") = std::nullopt, py::arg("cost") = "auto");

    py::class_<DistanceTable>(m, "DistanceTable")
        .def_readonly("nodes", &DistanceTable::nodes)
        .def_readonly("dist", &DistanceTable::dist)
        .def_readonly("certified", &DistanceTable::certified)
        .def("path_between", &DistanceTable::pathBetween, py::arg("from_node"),
             py::arg("to_node"))
        .def("to_json", &distanceTableToJson)
        .def_static("from_json", &distanceTableFromJson, py::arg("text"));
    m.def(
        "all_pairs",
        [](const MatrixGraph& graph, std::optional<int> kMax, const std::string& cost,
           unsigned threads) {
            return shapeDistanceTable(graph, makeConfig(graph, kMax, cost), threads);
        },
        py::arg("graph"), py::arg("k_max") = std::nullopt, py::arg("cost") = "auto",
        py::arg("threads") = 1);
    m.def("save_distance_table", &saveDistanceTable, py::arg("table"), py::arg("path"));
    m.def("load_distance_table", &loadDistanceTable, py::arg("path"));
    m.def("nearest_neighbors", &nearestNeighbors, py::arg("table"), py::arg("query"),
          py::arg("k"));

    py::class_<RetrievalEval>(m, "RetrievalEval")
        .def_readonly("nodes", &RetrievalEval::nodes)
        .def_readonly("labels", &RetrievalEval::labels)
        .def_readonly("g", &RetrievalEval::g)
        .def_readonly("mean_per_k", &RetrievalEval::meanPerK)
        .def_readonly("std_per_k", &RetrievalEval::stdPerK)
        .def_readonly("defined_per_k", &RetrievalEval::definedPerK)
        .def("summary_csv", &retrievalSummaryCsv)
        .def("per_query_csv", &retrievalPerQueryCsv);
    m.def("evaluate_retrieval", &evaluateRetrieval, py::arg("table"), py::arg("labels"));

    m.def(
        "intermediate_shapes",
        [](const MatrixGraph& graph, const std::string& source, const std::string& target,
           std::optional<int> fixedK, const std::string& cost) {
            return intermediateShapes(graph, source, target, fixedK,
                                      makeConfig(graph, std::nullopt, cost));
        },
        py::arg("graph"), py::arg("source"), py::arg("target"),
        py::arg("fixed_k") = std::nullopt, py::arg("cost") = "auto");

    py::class_<MorphSequence>(m, "MorphSequence")
        .def_readonly("keyframe_ids", &MorphSequence::keyframeIds)
        .def_readonly("placements", &MorphSequence::placements)
        .def_readonly("frame_times", &MorphSequence::frameTimes)
        .def_property_readonly("frames",
                               [](const MorphSequence& s) {
                                   std::vector<Eigen::MatrixXd> frames;
                                   for (const auto& f : s.frames) frames.push_back(fromPoints(f));
                                   return frames;
                               })
        .def_property_readonly("naive_frames",
                               [](const MorphSequence& s) {
                                   std::vector<Eigen::MatrixXd> frames;
                                   for (const auto& f : s.naiveFrames) {
                                       frames.push_back(fromPoints(f));
                                   }
                                   return frames;
                               })
        .def_property_readonly("faces",
                               [](const MorphSequence& s) { return fromFaces(s.faces); })
        .def("write", &writeMorphSequence, py::arg("directory"));
    m.def(
        "default_placements",
        [](const MatrixGraph& graph, const std::vector<std::string>& pathNodes,
           const std::string& cost) {
            return defaultPlacements(graph, pathNodes, *resolveCost(graph, cost));
        },
        py::arg("graph"), py::arg("path_nodes"), py::arg("cost") = "auto");
    m.def("morph", &morph, py::arg("keyframes"), py::arg("placements"),
          py::arg("frame_count") = 100);

    m.def("build_graph", &buildGraph, py::arg("shapes"), py::arg("config"),
          py::arg("threads") = 1);
    m.def(
        "cluster_distance_stats",
        [](const std::vector<ShapeRecord>& shapes, const BuilderConfig& config,
           unsigned threads) {
            const DistanceStats stats = clusterDistanceStats(shapes, config, threads);
            py::dict out;
            out["min"] = stats.min;
            out["q1"] = stats.quartile1;
            out["median"] = stats.median;
            out["q3"] = stats.quartile3;
            out["max"] = stats.max;
            out["mean"] = stats.mean;
            return out;
        },
        py::arg("shapes"), py::arg("config"), py::arg("threads") = 1);

    m.def("total_entropy", py::overload_cast<const Eigen::MatrixXd&>(&totalEntropy),
          py::arg("matrix"));
    m.def("builtin_descriptor",
          [](const Eigen::MatrixXd& vertices, int bins) {
              return builtinDescriptor(toPoints(vertices), bins);
          },
          py::arg("vertices"), py::arg("bins") = 32);

    m.def(
        "read_mesh",
        [](const std::filesystem::path& path) {
            const Mesh mesh = readMesh(path);
            return py::make_tuple(fromPoints(mesh.vertices), fromFaces(mesh.faces));
        },
        py::arg("path"));
    m.def(
        "write_obj",
        [](const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& faces,
           const std::filesystem::path& path) {
            Mesh mesh;
            mesh.vertices = toPoints(vertices);
            mesh.faces = toFaces(faces);
            writeObj(mesh, path);
        },
        py::arg("vertices"), py::arg("faces"), py::arg("path"));
    m.def("read_feature_csv", &readFeatureCsv, py::arg("path"), py::arg("rows"));
    m.def("read_labels_csv", &readLabelsCsv, py::arg("path"));

    m.def(
        "random_graph",
        [](int nodeCount, int dim, std::uint64_t seed, const std::string& ensemble,
           double etaLo, double etaHi) {
            MatrixEnsemble kind;
            if (ensemble == "iid-uniform") {
                kind = MatrixEnsemble::iidUniform;
            } else if (ensemble == "permutation-noise") {
                kind = MatrixEnsemble::permutationNoise;
            } else {
                throw ValidationError("unknown ensemble: " + ensemble);
            }
            return randomGraph(nodeCount, dim, seed, kind, etaLo, etaHi);
        },
        py::arg("node_count"), py::arg("dim"), py::arg("seed"),
        py::arg("ensemble") = "iid-uniform", py::arg("eta_lo") = 0.02,
        py::arg("eta_hi") = 5.0);
    m.def("random_scalar_graph", &randomScalarGraph, py::arg("node_count"), py::arg("seed"));
}
