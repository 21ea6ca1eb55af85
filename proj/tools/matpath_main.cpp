// matpath: build matrix-valued shape graphs and query them from the shell.
//
// Subcommands cover the full pipeline: build-graph (shape collection ->
// graph JSON), shortest-path / all-pairs (solver queries), retrieve
// (family retrieval evaluation), intermediate (interior nodes of an optimal
// path), morph (keyframe interpolation to OBJ frames), bench (solver timing
// report), and validate (invariant suite against a graph file).
//
// Exit codes: 0 success, 2 input or validation error, 3 infeasible request,
// 4 convergence failure. Diagnostics are single lines on stderr of the form
// "error <code>: <message>". All output files are byte-identical across
// reruns and thread counts; wall-clock times appear only in bench reports
// and behind --timings.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matpath/builder.hpp"
#include "matpath/cost.hpp"
#include "matpath/errors.hpp"
#include "matpath/graph_json.hpp"
#include "matpath/mesh_io.hpp"
#include "matpath/metric.hpp"
#include "matpath/morph.hpp"
#include "matpath/random_graph.hpp"
#include "matpath/solver.hpp"

namespace fs = std::filesystem;
using namespace matpath;

namespace {

void writeTextFile(const fs::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + file.string());
    out << text;
}

// Scalar graphs reduce the engine to additive shortest paths; everything
// else runs under the entropy cost.
std::shared_ptr<const CostFunction> defaultCostFor(const MatrixGraph& graph) {
    return graph.dim() == 1 ? additiveScalarCost() : totalEntropyCost();
}

std::string joinedPath(const std::vector<std::string>& nodes) {
    std::string text;
    for (const auto& node : nodes) {
        if (!text.empty()) text += " -> ";
        text += node;
    }
    return text;
}

// Number of data rows in a feature CSV, using the same header rule as the
// reader: a leading line whose first field is not numeric is a header.
Eigen::Index featureCsvRows(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot read " + file.string());
    std::string line;
    Eigen::Index rows = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        if (first) {
            first = false;
            char* end = nullptr;
            std::strtod(line.c_str(), &end);
            if (end == line.c_str()) continue;  // header line
        }
        ++rows;
    }
    return rows;
}

struct BuildGraphArgs {
    std::vector<std::string> meshes;
    std::vector<std::string> features;
    std::string configFile;
    std::string out;
    std::string emitConfig;
    bool noBuiltin = false;
    bool distanceStats = false;
    BuilderConfig config;
};

std::vector<ShapeRecord> loadShapes(const BuildGraphArgs& args) {
    if (args.meshes.empty() && args.features.empty()) {
        throw ValidationError("no input shapes: pass --mesh and/or --features");
    }
    // Feature files pair with meshes by file stem; without meshes each
    // feature file becomes a vertex-free shape of its own.
    std::map<std::string, fs::path> featureByStem;
    for (const auto& file : args.features) {
        const fs::path path(file);
        if (!featureByStem.emplace(path.stem().string(), path).second) {
            throw ValidationError("duplicate feature file stem: " + path.stem().string());
        }
    }
    std::vector<ShapeRecord> shapes;
    for (const auto& file : args.meshes) {
        const fs::path path(file);
        ShapeRecord shape;
        shape.id = path.stem().string();
        Mesh mesh = readMesh(path);
        shape.vertices = std::move(mesh.vertices);
        shape.faces = std::move(mesh.faces);
        const auto found = featureByStem.find(shape.id);
        if (found != featureByStem.end()) {
            shape.features = readFeatureCsv(found->second,
                                            static_cast<Eigen::Index>(shape.vertices.size()));
            featureByStem.erase(found);
        } else if (args.noBuiltin) {
            throw ValidationError("shape " + shape.id +
                                  ": no feature file and the builtin descriptor is disabled");
        }
        shapes.push_back(std::move(shape));
    }
    if (args.meshes.empty()) {
        for (const auto& [stem, path] : featureByStem) {
            ShapeRecord shape;
            shape.id = stem;
            shape.features = readFeatureCsv(path, featureCsvRows(path));
            shapes.push_back(std::move(shape));
        }
    } else if (!featureByStem.empty()) {
        throw ValidationError("feature file " + featureByStem.begin()->second.string() +
                              " matches no mesh stem");
    }
    return shapes;
}

void cmdBuildGraph(const BuildGraphArgs& args, unsigned threads) {
    const auto shapes = loadShapes(args);
    if (args.distanceStats) {
        const auto stats = clusterDistanceStats(shapes, args.config, threads);
        std::cout << "min " << stats.min << "\nq1 " << stats.quartile1 << "\nmedian "
                  << stats.median << "\nq3 " << stats.quartile3 << "\nmax " << stats.max
                  << "\nmean " << stats.mean << "\n";
        return;
    }
    if (args.out.empty()) throw ValidationError("build-graph needs --out (or --distance-stats)");
    if (!args.emitConfig.empty()) {
        writeTextFile(args.emitConfig, builderConfigToJson(args.config));
    }
    const auto graph = buildGraph(shapes, args.config, threads);
    saveGraph(graph, args.out);
    std::cout << "wrote " << args.out << " (nodes " << graph.nodeCount() << ", dim "
              << graph.dim() << ")\n";
}

struct ShortestPathArgs {
    std::string graphFile;
    std::string source;
    std::string target;
    std::optional<int> fixedK;
    std::optional<int> kMax;
    bool certify = false;
    bool bruteForce = false;
    bool timings = false;
    std::string jsonOut;
};

void cmdShortestPath(const ShortestPathArgs& args) {
    const auto graph = loadGraph(args.graphFile);
    SolverConfig config;
    config.cost = defaultCostFor(graph);
    config.kMax = args.kMax;
    if (args.certify && args.kMax) {
        throw ValidationError("--certify contradicts --kmax; certification needs the full search");
    }
    std::cout << std::setprecision(15);
    if (args.fixedK) {
        if (args.bruteForce || !args.jsonOut.empty()) {
            throw ValidationError("--fixed-k yields a single path; drop --brute-force/--json");
        }
        const Path path = fixedKPath(graph, args.source, args.target, *args.fixedK, config);
        std::cout << "path " << joinedPath(path.nodes) << "\ncost " << path.cost << "\n";
        return;
    }
    if (args.bruteForce) {
        if (!args.jsonOut.empty()) throw ValidationError("--brute-force does not write JSON");
        const Path path = bruteForceOracle(graph, args.source, args.target, config);
        std::cout << "path " << joinedPath(path.nodes) << "\ncost " << path.cost << "\n";
        return;
    }
    const auto result = shortestPathsFrom(graph, args.source, config);
    const Path& path = result.best[static_cast<size_t>(graph.nodeIndex(args.target))];
    std::cout << "path " << joinedPath(path.nodes) << "\ncost " << path.cost << "\ncertified "
              << (result.certified ? "true" : "false") << "\n";
    if (args.timings) std::cout << "seconds " << result.stats.seconds << "\n";
    if (!args.jsonOut.empty()) {
        writeTextFile(args.jsonOut, resultToJson(result, args.timings));
    }
}

struct AllPairsArgs {
    std::string graphFile;
    std::optional<int> kMax;
    std::string out;
    bool timings = false;
};

void cmdAllPairs(const AllPairsArgs& args, unsigned threads) {
    const auto graph = loadGraph(args.graphFile);
    SolverConfig config;
    config.cost = defaultCostFor(graph);
    config.kMax = args.kMax;
    const auto table = shapeDistanceTable(graph, config, threads);
    if (!args.out.empty()) saveDistanceTable(table, args.out);
    std::cout << "nodes " << table.nodes.size() << "\ncertified "
              << (table.certified ? "true" : "false") << "\n";
}

struct RetrieveArgs {
    std::string graphFile;
    std::string tableFile;
    std::string labelsFile;
    std::string summaryOut;
    std::string perQueryOut;
};

void cmdRetrieve(const RetrieveArgs& args, unsigned threads) {
    if (args.graphFile.empty() == args.tableFile.empty()) {
        throw ValidationError("retrieve needs exactly one of --graph or --table");
    }
    DistanceTable table;
    if (!args.graphFile.empty()) {
        const auto graph = loadGraph(args.graphFile);
        SolverConfig config;
        config.cost = defaultCostFor(graph);
        table = shapeDistanceTable(graph, config, threads);
    } else {
        table = loadDistanceTable(args.tableFile);
    }
    const auto eval = evaluateRetrieval(table, readLabelsCsv(args.labelsFile));
    const std::string summary = retrievalSummaryCsv(eval);
    if (!args.summaryOut.empty()) {
        writeTextFile(args.summaryOut, summary);
    } else {
        std::cout << summary;
    }
    if (!args.perQueryOut.empty()) writeTextFile(args.perQueryOut, retrievalPerQueryCsv(eval));
}

struct IntermediateArgs {
    std::string graphFile;
    std::string source;
    std::string target;
    std::optional<int> fixedK;
};

void cmdIntermediate(const IntermediateArgs& args) {
    const auto graph = loadGraph(args.graphFile);
    SolverConfig config;
    config.cost = defaultCostFor(graph);
    const auto interior = intermediateShapes(graph, args.source, args.target, args.fixedK, config);
    for (const auto& node : interior) std::cout << node << "\n";
}

struct MorphArgs {
    std::vector<std::string> keyframeFiles;
    std::string graphFile;
    std::vector<double> placements;
    std::string outDir;
    int frames = 100;
};

void cmdMorph(const MorphArgs& args) {
    std::vector<ShapeRecord> keyframes;
    for (const auto& file : args.keyframeFiles) {
        const fs::path path(file);
        ShapeRecord shape;
        shape.id = path.stem().string();
        Mesh mesh = readMesh(path);
        shape.vertices = std::move(mesh.vertices);
        shape.faces = std::move(mesh.faces);
        keyframes.push_back(std::move(shape));
    }
    std::vector<double> placements = args.placements;
    if (placements.empty()) {
        if (!args.graphFile.empty()) {
            const auto graph = loadGraph(args.graphFile);
            std::vector<std::string> ids;
            for (const auto& shape : keyframes) ids.push_back(shape.id);
            placements = defaultPlacements(graph, ids, *defaultCostFor(graph));
        } else {
            const double steps = static_cast<double>(keyframes.size()) - 1.0;
            for (size_t i = 0; i < keyframes.size(); ++i) {
                placements.push_back(static_cast<double>(i) / steps);
            }
        }
    }
    const auto sequence = morph(keyframes, placements, args.frames);
    writeMorphSequence(sequence, args.outDir);
    std::cout << "wrote " << sequence.frames.size() << " frames to " << args.outDir << "\n";
}

struct BenchArgs {
    std::string graphFile;
    std::string dataset;
    int randomNodes = 0;
    int matrixDim = 28;
    std::optional<int> kMax;
    bool cert = false;
    std::string out;
    std::string emitGraph;
};

void cmdBench(const BenchArgs& args, unsigned threads, std::uint64_t seed) {
    if (args.graphFile.empty() == (args.randomNodes == 0)) {
        throw ValidationError("bench needs exactly one of --graph or --random-nodes");
    }
    MatrixGraph graph = args.graphFile.empty()
                            ? randomGraph(args.randomNodes, args.matrixDim, seed)
                            : loadGraph(args.graphFile);
    std::string dataset = args.dataset;
    if (dataset.empty()) {
        dataset = args.graphFile.empty() ? "random" + std::to_string(args.randomNodes)
                                         : fs::path(args.graphFile).stem().string();
    }
    if (!args.emitGraph.empty()) saveGraph(graph, args.emitGraph);

    SolverConfig spConfig;
    spConfig.cost = defaultCostFor(graph);
    spConfig.kMax = args.kMax;
    const auto sp = allPairs(graph, spConfig, threads);

    std::ostringstream csv;
    csv << "dataset,nodes,kmax,sp_seconds,cert_seconds,sp_paths,cert_paths,sp_pruned,cert_pruned\n";
    csv << dataset << ',' << graph.nodeCount() << ',';
    if (args.kMax) csv << *args.kMax;
    csv << ',' << std::fixed << std::setprecision(3) << sp.stats.seconds << ',';
    if (args.cert) {
        SolverConfig certConfig;
        certConfig.cost = spConfig.cost;
        const auto cert = allPairs(graph, certConfig, threads);
        csv << cert.stats.seconds << ',' << sp.stats.pathsEvaluated << ','
            << cert.stats.pathsEvaluated << ',' << sp.stats.prunedCount << ','
            << cert.stats.prunedCount << '\n';
    } else {
        csv << ',' << sp.stats.pathsEvaluated << ",," << sp.stats.prunedCount << ",\n";
    }
    if (!args.out.empty()) {
        writeTextFile(args.out, csv.str());
    } else {
        std::cout << csv.str();
    }
}

struct ValidateArgs {
    std::string graphFile;
};

// Invariant suite against a graph file: marginals, cost monotonicity along
// composed edges, solver-versus-oracle agreement on small graphs, and the
// metric properties of the all-pairs table.
int cmdValidate(const ValidateArgs& args, unsigned threads, std::uint64_t seed) {
    bool allOk = true;
    const auto report = [&allOk](bool ok, const std::string& name, const std::string& detail) {
        allOk = allOk && ok;
        std::cout << (ok ? "ok " : "fail ") << name << ": " << detail << "\n";
    };

    const auto graph = loadGraph(args.graphFile);
    const auto cost = defaultCostFor(graph);
    const int count = graph.nodeCount();
    report(true, "load",
           std::to_string(count) + " nodes, dim " + std::to_string(graph.dim()));

    if (graph.dim() > 1) {
        double worst = 0.0;
        for (int a = 0; a < count; ++a) {
            for (int b = 0; b < count; ++b) {
                if (a == b) continue;
                const auto& m = graph.edge(a, b).entries();
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    worst = std::max(worst, std::abs(m.row(i).sum() - 1.0));
                    worst = std::max(worst, std::abs(m.col(i).sum() - 1.0));
                }
            }
        }
        std::ostringstream detail;
        detail << "worst marginal deviation " << worst;
        report(worst <= 1e-8, "marginals", detail.str());
    } else {
        report(true, "marginals", "skipped (scalar weights)");
    }

    // Monotonicity of the cost along two-edge compositions: all triples up
    // to 20 nodes, a seeded sample of 5000 beyond that.
    {
        double worstMargin = 0.0;
        std::uint64_t checked = 0;
        const auto check = [&](int a, int b, int c) {
            const auto composed = cost->compose(graph.edge(a, b), graph.edge(b, c));
            const double margin =
                cost->evaluate(composed) - cost->evaluate(graph.edge(a, b));
            worstMargin = std::min(worstMargin, margin);
            ++checked;
        };
        if (count <= 20) {
            for (int a = 0; a < count; ++a) {
                for (int b = 0; b < count; ++b) {
                    for (int c = 0; c < count; ++c) {
                        if (a != b && b != c && a != c) check(a, b, c);
                    }
                }
            }
        } else {
            std::mt19937_64 rng(seed);
            while (checked < 5000) {
                const int a = uniformInt(rng, count);
                const int b = uniformInt(rng, count);
                const int c = uniformInt(rng, count);
                if (a != b && b != c && a != c) check(a, b, c);
            }
        }
        std::ostringstream detail;
        detail << checked << " compositions, worst margin " << worstMargin;
        report(worstMargin >= -1e-9, "monotonicity", detail.str());
    }

    SolverConfig config;
    config.cost = cost;
    const auto table = shapeDistanceTable(graph, config, threads);

    if (count <= 9) {
        bool match = true;
        for (int s = 0; s < count && match; ++s) {
            for (int t = 0; t < count && match; ++t) {
                if (s == t) continue;
                const auto oracle =
                    bruteForceOracle(graph, graph.nodes()[static_cast<size_t>(s)],
                                     graph.nodes()[static_cast<size_t>(t)], config);
                const auto& solved = table.pathBetween(graph.nodes()[static_cast<size_t>(s)],
                                                       graph.nodes()[static_cast<size_t>(t)]);
                match = std::abs(oracle.cost - solved.cost) <= 1e-9 &&
                        oracle.nodes == solved.nodes;
            }
        }
        report(match, "oracle",
               match ? std::to_string(count * (count - 1)) + " pairs match within 1e-9"
                     : "solver disagrees with exhaustive enumeration");
    } else {
        report(true, "oracle", "skipped (graph larger than the exhaustive cap)");
    }

    {
        bool ok = true;
        double worstAsym = 0.0;
        for (int i = 0; i < count; ++i) {
            ok = ok && table.dist(i, i) <= 1e-12;
            for (int j = 0; j < count; ++j) {
                ok = ok && table.dist(i, j) >= 0.0;
                worstAsym = std::max(worstAsym, std::abs(table.dist(i, j) - table.dist(j, i)));
            }
        }
        ok = ok && worstAsym <= 1e-9;
        std::uint64_t triangles = 0;
        if (count <= 10) {
            for (int i = 0; i < count && ok; ++i) {
                for (int j = 0; j < count && ok; ++j) {
                    for (int k = 0; k < count && ok; ++k) {
                        if (i == j || j == k || i == k) continue;
                        const auto via = cost->compose(table.paths[static_cast<size_t>(i)]
                                                           [static_cast<size_t>(j)].composed,
                                                       table.paths[static_cast<size_t>(j)]
                                                           [static_cast<size_t>(k)].composed);
                        ok = ok && table.dist(i, k) <= cost->evaluate(via) + 1e-9;
                        ++triangles;
                    }
                }
            }
        }
        std::ostringstream detail;
        detail << "zero diagonal, symmetry within " << worstAsym << ", " << triangles
               << " composed triangles";
        report(ok, "metric", detail.str());
    }

    return allOk ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app("matrix-valued shortest paths for shape collections");
    app.require_subcommand(1);
    unsigned threads = 1;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker threads for parallel stages")
        ->check(CLI::PositiveNumber);
    auto* seedOpt = app.add_option("--seed", seed, "seed for every random draw");

    BuildGraphArgs build;
    auto* buildCmd = app.add_subcommand("build-graph", "build a graph from a shape collection")
        ->fallthrough();
    buildCmd->add_option("--mesh", build.meshes, "mesh files (.off/.obj), one per shape")
        ->check(CLI::ExistingFile);
    buildCmd
        ->add_option("--features", build.features,
                     "per-vertex feature CSVs, matched to meshes by file stem")
        ->check(CLI::ExistingFile);
    buildCmd->add_option("--config", build.configFile, "builder config JSON")
        ->check(CLI::ExistingFile);
    buildCmd->add_option("--out", build.out, "output graph JSON");
    buildCmd->add_option("--emit-config", build.emitConfig, "write the effective config JSON");
    buildCmd->add_flag("--no-builtin", build.noBuiltin,
                       "require feature files instead of the builtin descriptor");
    buildCmd->add_flag("--distance-stats", build.distanceStats,
                       "print the cluster distance distribution (to pick sigma) and stop");
    auto* clustersOpt = buildCmd->add_option("--clusters", build.config.n,
                                             "clusters per shape (edge matrix dimension)");
    auto* percentilesOpt =
        buildCmd->add_option("--percentiles", build.config.p, "percentile levels per descriptor");
    auto* sigmaOpt = buildCmd->add_option("--sigma", build.config.sigma,
                                          "Gaussian kernel bandwidth on cluster distances");
    auto* tolOpt = buildCmd->add_option("--sinkhorn-tol", build.config.sinkhornTol,
                                        "marginal deviation accepted by normalization");
    auto* iterOpt = buildCmd->add_option("--sinkhorn-max-iter", build.config.sinkhornMaxIter,
                                         "normalization sweep cap");
    auto* restartsOpt = buildCmd->add_option("--kmeans-restarts", build.config.kmeansRestarts,
                                             "clustering attempts per shape");

    ShortestPathArgs sp;
    auto* spCmd = app.add_subcommand("shortest-path", "optimal path between two nodes")
        ->fallthrough();
    spCmd->add_option("graph", sp.graphFile, "graph JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    spCmd->add_option("--source", sp.source, "source node id")->required();
    spCmd->add_option("--target", sp.target, "target node id")->required();
    spCmd->add_option("--fixed-k", sp.fixedK, "cheapest path with exactly this many edges");
    spCmd->add_option("--kmax", sp.kMax, "cap on path edge count (SP mode)");
    spCmd->add_flag("--certify", sp.certify, "insist on the full certified search");
    spCmd->add_flag("--brute-force", sp.bruteForce, "exhaustive reference instead of the solver");
    spCmd->add_flag("--timings", sp.timings, "print wall time and include it in JSON");
    spCmd->add_option("--json", sp.jsonOut, "write the full single-source result as JSON");

    AllPairsArgs ap;
    auto* apCmd = app.add_subcommand("all-pairs", "distance table between all node pairs")
        ->fallthrough();
    apCmd->add_option("graph", ap.graphFile, "graph JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    apCmd->add_option("--kmax", ap.kMax, "cap on path edge count (SP mode)");
    apCmd->add_option("--out", ap.out, "write the distance table JSON");

    RetrieveArgs ret;
    auto* retCmd = app.add_subcommand("retrieve", "family retrieval quality from labels")
        ->fallthrough();
    retCmd->add_option("--graph", ret.graphFile, "graph JSON file")->check(CLI::ExistingFile);
    retCmd->add_option("--table", ret.tableFile, "precomputed distance table JSON")
        ->check(CLI::ExistingFile);
    retCmd->add_option("--labels", ret.labelsFile, "CSV mapping shape id to family label")
        ->required()
        ->check(CLI::ExistingFile);
    retCmd->add_option("--summary", ret.summaryOut, "write the k,mean_g,std_g CSV here");
    retCmd->add_option("--per-query", ret.perQueryOut, "write the query,k,g CSV here");

    IntermediateArgs inter;
    auto* interCmd =
        app.add_subcommand("intermediate", "collection members an optimal path passes through")
        ->fallthrough();
    interCmd->add_option("graph", inter.graphFile, "graph JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    interCmd->add_option("--source", inter.source, "source node id")->required();
    interCmd->add_option("--target", inter.target, "target node id")->required();
    interCmd->add_option("--fixed-k", inter.fixedK, "force exactly this many edges");

    MorphArgs morphArgs;
    auto* morphCmd = app.add_subcommand("morph", "interpolate keyframe meshes to OBJ frames")
        ->fallthrough();
    morphCmd->add_option("keyframes", morphArgs.keyframeFiles, "keyframe meshes, source first")
        ->required()
        ->expected(-2)
        ->check(CLI::ExistingFile);
    morphCmd->add_option("--out", morphArgs.outDir, "output directory")->required();
    morphCmd->add_option("--frames", morphArgs.frames, "number of frames")
        ->check(CLI::PositiveNumber);
    morphCmd
        ->add_option("--placements", morphArgs.placements,
                     "comma-separated keyframe times in [0,1]")
        ->delimiter(',');
    morphCmd->add_option("--graph", morphArgs.graphFile,
                         "derive placements from direct-edge costs in this graph");

    BenchArgs bench;
    auto* benchCmd = app.add_subcommand("bench", "all-pairs solver timing report")
        ->fallthrough();
    benchCmd->add_option("--graph", bench.graphFile, "graph JSON file")->check(CLI::ExistingFile);
    benchCmd->add_option("--random-nodes", bench.randomNodes,
                         "benchmark a random complete graph of this size");
    benchCmd->add_option("--matrix-dim", bench.matrixDim,
                         "edge matrix dimension for --random-nodes");
    benchCmd->add_option("--kmax", bench.kMax, "cap on path edge count (SP mode)");
    benchCmd->add_flag("--cert", bench.cert, "also run the uncapped certifying search");
    benchCmd->add_option("--out", bench.out, "write the report CSV here");
    benchCmd->add_option("--emit-graph", bench.emitGraph, "save the benchmarked graph JSON");

    ValidateArgs validate;
    auto* validateCmd = app.add_subcommand("validate", "run the invariant suite on a graph file")
        ->fallthrough();
    validateCmd->add_option("graph", validate.graphFile, "graph JSON file")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);

        if (buildCmd->parsed()) {
            if (!build.configFile.empty()) {
                // start from the file, then let explicitly passed flags win
                BuilderConfig merged = loadBuilderConfig(build.configFile);
                if (clustersOpt->count() > 0) merged.n = build.config.n;
                if (percentilesOpt->count() > 0) merged.p = build.config.p;
                if (sigmaOpt->count() > 0) merged.sigma = build.config.sigma;
                if (tolOpt->count() > 0) merged.sinkhornTol = build.config.sinkhornTol;
                if (iterOpt->count() > 0) merged.sinkhornMaxIter = build.config.sinkhornMaxIter;
                if (restartsOpt->count() > 0) merged.kmeansRestarts = build.config.kmeansRestarts;
                build.config = merged;
            }
            if (seedOpt->count() > 0) build.config.kmeansSeed = seed;
            cmdBuildGraph(build, threads);
        }
        if (spCmd->parsed()) cmdShortestPath(sp);
        if (apCmd->parsed()) cmdAllPairs(ap, threads);
        if (retCmd->parsed()) cmdRetrieve(ret, threads);
        if (interCmd->parsed()) cmdIntermediate(inter);
        if (morphCmd->parsed()) cmdMorph(morphArgs);
        if (benchCmd->parsed()) cmdBench(bench, threads, seed);
        if (validateCmd->parsed()) return cmdValidate(validate, threads, seed);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error 2: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error 2: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "error 3: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "error 4: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error 2: " << e.what() << "\n";
        return 2;
    }
}
