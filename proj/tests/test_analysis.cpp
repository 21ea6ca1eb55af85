#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "matpath/errors.hpp"
#include "matpath/mesh_io.hpp"
#include "matpath/metric.hpp"
#include "matpath/morph.hpp"
#include "matpath/random_graph.hpp"
#include "matpath/solver.hpp"
#include "test_support.hpp"

using namespace matpath;

namespace {

SolverConfig scalarSolve() {
    SolverConfig config;
    config.cost = std::make_shared<AdditiveScalarCost>();
    return config;
}

// Four nodes where the cheapest route takes three hops: weights chosen so the
// two-edge detour through b already beats everything shorter.
MatrixGraph detourGraph() {
    return testsupport::scalarGraph({"s", "a", "b", "t"}, {
                                                              {{"s", "a"}, 4.0},
                                                              {{"s", "b"}, 2.0},
                                                              {{"s", "t"}, 3.5},
                                                              {{"b", "a"}, 0.8},
                                                              {{"b", "t"}, 1.0},
                                                              {{"a", "t"}, 0.1},
                                                          });
}

DistanceTable handTable() {
    DistanceTable table;
    table.nodes = {"a1", "a2", "a3", "b1", "b2"};
    table.dist = Eigen::MatrixXd::Zero(5, 5);
    auto set = [&](int i, int j, double d) {
        table.dist(i, j) = d;
        table.dist(j, i) = d;
    };
    set(0, 1, 1.0);   // a1 - a2
    set(0, 2, 1.2);   // a1 - a3
    set(1, 2, 1.1);   // a2 - a3
    set(3, 4, 0.9);   // b1 - b2
    set(0, 4, 1.05);  // b2 sneaks between a1's family members
    set(0, 3, 5.0);
    set(1, 3, 5.1);
    set(1, 4, 5.2);
    set(2, 3, 5.3);
    set(2, 4, 5.4);
    table.certified = true;
    return table;
}

}  // namespace

TEST_SUITE("shape metric") {
    TEST_CASE("distance table is a proper dissimilarity") {
        const auto graph = randomGraph(6, 4, 321);
        const auto table = shapeDistanceTable(graph);

        REQUIRE(table.nodes == graph.nodes());
        REQUIRE(table.dist.rows() == 6);
        CHECK(table.certified);

        for (int i = 0; i < 6; ++i) CHECK(table.dist(i, i) == 0.0);
        CHECK(table.dist == table.dist.transpose());
        CHECK(table.dist.minCoeff() >= 0.0);

        // Triangle bound in the composition sense: going i -> j -> k by the
        // two optimal legs is itself a candidate route, so the direct optimum
        // can never cost more than the composed legs.
        TotalEntropyCost entropy;
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                for (int k = 0; k < 6; ++k) {
                    if (i == j || j == k || i == k) continue;
                    const auto& left = table.paths[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    const auto& right = table.paths[static_cast<size_t>(j)][static_cast<size_t>(k)];
                    const double composed =
                        entropy.evaluate(compose(left.composed, right.composed));
                    CHECK(table.dist(i, k) <= composed + 1e-9);
                }
            }
        }
    }

    TEST_CASE("derived reverse direction matches an independent solve") {
        const auto graph = randomGraph(5, 3, 99);
        const auto table = shapeDistanceTable(graph);
        // The last node is the one all-pairs never solves directly.
        const auto& last = graph.nodes().back();
        const auto fresh = shortestPathsFrom(graph, last);
        for (int j = 0; j < graph.nodeCount() - 1; ++j) {
            CHECK(std::abs(table.dist(graph.nodeCount() - 1, j) - fresh.best[j].cost) <= 1e-9);
        }
    }

    TEST_CASE("paths are reachable by name") {
        const auto graph = randomGraph(4, 3, 7);
        const auto table = shapeDistanceTable(graph);
        const auto& path = table.pathBetween(table.nodes[0], table.nodes[2]);
        CHECK(path.nodes.front() == table.nodes[0]);
        CHECK(path.nodes.back() == table.nodes[2]);
        CHECK(path.cost == table.dist(0, 2));
        CHECK_THROWS_AS(table.nodeIndex("nope"), ValidationError);
        CHECK_THROWS_AS(table.pathBetween("nope", table.nodes[0]), ValidationError);
    }

    TEST_CASE("table files round trip byte for byte") {
        const auto graph = randomGraph(4, 3, 11);
        const auto table = shapeDistanceTable(graph);
        const auto text = distanceTableToJson(table);
        const auto back = distanceTableFromJson(text);
        CHECK(back.nodes == table.nodes);
        CHECK(back.certified == table.certified);
        CHECK(back.dist == table.dist);
        CHECK(back.paths.empty());
        CHECK(distanceTableToJson(back) == text);
        CHECK_THROWS_AS(back.pathBetween(table.nodes[0], table.nodes[1]), ValidationError);

        const auto file = std::filesystem::temp_directory_path() / "matpath_table.json";
        saveDistanceTable(table, file);
        CHECK(distanceTableToJson(loadDistanceTable(file)) == text);

        CHECK_THROWS_AS(distanceTableFromJson("{}"), ValidationError);
        CHECK_THROWS_AS(distanceTableFromJson(R"({"nodes": ["a"], "certified": true,
                                                  "dist": [[0]]})"),
                        ValidationError);
        CHECK_THROWS_AS(distanceTableFromJson(R"({"nodes": ["a", "b"], "certified": true,
                                                  "dist": [[0, 1]]})"),
                        ValidationError);
    }
}

TEST_SUITE("neighbor retrieval") {
    TEST_CASE("neighbors sort by distance then id") {
        DistanceTable table;
        table.nodes = {"a", "b", "c", "d"};
        table.dist = Eigen::MatrixXd::Zero(4, 4);
        table.dist(0, 1) = table.dist(1, 0) = 1.0;
        table.dist(0, 2) = table.dist(2, 0) = 2.0;
        table.dist(0, 3) = table.dist(3, 0) = 1.0;  // ties with b, id breaks it
        table.dist(1, 2) = table.dist(2, 1) = 0.5;
        table.dist(1, 3) = table.dist(3, 1) = 3.0;
        table.dist(2, 3) = table.dist(3, 2) = 4.0;

        CHECK(nearestNeighbors(table, "a", 3) == std::vector<std::string>{"b", "d", "c"});
        CHECK(nearestNeighbors(table, "a", 1) == std::vector<std::string>{"b"});
        CHECK(nearestNeighbors(table, "b", 2) == std::vector<std::string>{"c", "a"});
        CHECK_THROWS_AS(nearestNeighbors(table, "a", 0), ValidationError);
        CHECK_THROWS_AS(nearestNeighbors(table, "a", 4), ValidationError);
        CHECK_THROWS_AS(nearestNeighbors(table, "zzz", 1), ValidationError);
    }

    TEST_CASE("retrieval scores match hand computation") {
        const auto table = handTable();
        const std::map<std::string, std::string> labels = {
            {"a1", "A"}, {"a2", "A"}, {"a3", "A"}, {"b1", "B"}, {"b2", "B"}};
        const auto eval = evaluateRetrieval(table, labels);

        REQUIRE(eval.g.rows() == 5);
        REQUIRE(eval.g.cols() == 4);

        // query a1 sees a2, b2, a3, b1 in that order; family size 2
        CHECK(eval.g(0, 0) == 1.0);
        CHECK(eval.g(0, 1) == 0.5);
        CHECK(eval.g(0, 2) == 1.0);
        CHECK(eval.g(0, 3) == 1.0);
        // b1 and b2 find each other first and have a single family partner
        for (int k = 0; k < 4; ++k) {
            CHECK(eval.g(3, k) == 1.0);
            CHECK(eval.g(4, k) == 1.0);
        }

        REQUIRE(eval.meanPerK.size() == 4);
        CHECK(eval.meanPerK[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eval.meanPerK[1] == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(eval.meanPerK[2] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eval.stdPerK[1] == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(eval.stdPerK[0] == 0.0);
        for (int defined : eval.definedPerK) CHECK(defined == 5);

        const auto summary = retrievalSummaryCsv(eval);
        CHECK(summary.rfind("k,mean_g,std_g\n", 0) == 0);
        CHECK(std::count(summary.begin(), summary.end(), '\n') == 5);
        const auto perQuery = retrievalPerQueryCsv(eval);
        CHECK(perQuery.rfind("query,k,g\n", 0) == 0);
        CHECK(perQuery.find("a1,2,0.5") != std::string::npos);
    }

    TEST_CASE("singleton families are undefined and skipped") {
        DistanceTable table;
        table.nodes = {"x", "y", "z"};
        table.dist = Eigen::MatrixXd::Zero(3, 3);
        table.dist(0, 1) = table.dist(1, 0) = 1.0;
        table.dist(0, 2) = table.dist(2, 0) = 2.0;
        table.dist(1, 2) = table.dist(2, 1) = 3.0;
        const std::map<std::string, std::string> labels = {
            {"x", "pair"}, {"y", "pair"}, {"z", "alone"}};
        const auto eval = evaluateRetrieval(table, labels);

        CHECK(std::isnan(eval.g(2, 0)));
        CHECK(std::isnan(eval.g(2, 1)));
        CHECK(eval.g(0, 0) == 1.0);
        CHECK(eval.g(1, 0) == 1.0);
        for (int defined : eval.definedPerK) CHECK(defined == 2);
        CHECK(eval.meanPerK[0] == 1.0);
        CHECK(retrievalPerQueryCsv(eval).find("z,1,undefined") != std::string::npos);
    }

    TEST_CASE("one big family scores perfectly") {
        const auto graph = randomGraph(5, 3, 13);
        const auto table = shapeDistanceTable(graph);
        std::map<std::string, std::string> labels;
        for (const auto& node : table.nodes) labels[node] = "all";
        const auto eval = evaluateRetrieval(table, labels);
        for (int q = 0; q < eval.g.rows(); ++q) {
            for (int k = 0; k < eval.g.cols(); ++k) CHECK(eval.g(q, k) == 1.0);
        }
        for (double m : eval.meanPerK) CHECK(m == 1.0);
        for (double s : eval.stdPerK) CHECK(s == 0.0);
    }

    TEST_CASE("every node needs a label") {
        const auto graph = randomGraph(4, 3, 5);
        const auto table = shapeDistanceTable(graph);
        std::map<std::string, std::string> labels;
        labels[table.nodes[0]] = "only one";
        CHECK_THROWS_AS(evaluateRetrieval(table, labels), ValidationError);
    }
}

TEST_SUITE("intermediate shapes") {
    TEST_CASE("reports the interior of the optimal route") {
        const auto graph = detourGraph();
        CHECK(intermediateShapes(graph, "s", "t", std::nullopt, scalarSolve()) ==
              std::vector<std::string>{"b", "a"});
        CHECK(intermediateShapes(graph, "s", "t", 1, scalarSolve()).empty());
        CHECK(intermediateShapes(graph, "s", "t", 2, scalarSolve()) ==
              std::vector<std::string>{"b"});
    }

    TEST_CASE("empty when the direct edge wins") {
        const auto graph =
            testsupport::scalarGraph({"u", "v", "w"},
                                     {{{"u", "v"}, 1.0}, {{"u", "w"}, 5.0}, {{"v", "w"}, 5.0}});
        CHECK(intermediateShapes(graph, "u", "v", std::nullopt, scalarSolve()).empty());
    }

    TEST_CASE("rejects degenerate queries") {
        const auto graph = detourGraph();
        CHECK_THROWS_AS(intermediateShapes(graph, "s", "s", std::nullopt, scalarSolve()),
                        ValidationError);
        CHECK_THROWS_AS(intermediateShapes(graph, "s", "t", 9, scalarSolve()), InfeasibleError);
    }
}

TEST_SUITE("morph sequences") {
    TEST_CASE("keyframe placements follow the edge costs") {
        const auto graph =
            testsupport::scalarGraph({"s", "a", "t"},
                                     {{{"s", "a"}, 1.0}, {{"a", "t"}, 4.0}, {{"s", "t"}, 10.0}});
        AdditiveScalarCost cost;
        const auto placements = defaultPlacements(graph, {"s", "a", "t"}, cost);
        REQUIRE(placements.size() == 3);
        CHECK(placements[0] == 0.0);
        CHECK(placements[2] == 1.0);
        CHECK(placements[1] == doctest::Approx(0.2).epsilon(1e-6));
    }

    TEST_CASE("equal legs meet exactly in the middle") {
        const auto graph =
            testsupport::scalarGraph({"s", "a", "t"},
                                     {{{"s", "a"}, 2.0}, {{"a", "t"}, 2.0}, {{"s", "t"}, 9.0}});
        AdditiveScalarCost cost;
        const auto placements = defaultPlacements(graph, {"s", "a", "t"}, cost);
        CHECK(placements[1] == 0.5);
    }

    TEST_CASE("zero cost legs stay strictly increasing") {
        const auto zeroish =
            testsupport::scalarGraph({"s", "a", "t"},
                                     {{{"s", "a"}, 0.0}, {{"a", "t"}, 2.0}, {{"s", "t"}, 1.0}});
        AdditiveScalarCost cost;
        const auto placements = defaultPlacements(zeroish, {"s", "a", "t"}, cost);
        CHECK(placements[1] > 0.0);
        CHECK(placements[1] < 1e-8);

        const auto allZero =
            testsupport::scalarGraph({"s", "a", "t"},
                                     {{{"s", "a"}, 0.0}, {{"a", "t"}, 0.0}, {{"s", "t"}, 0.0}});
        const auto uniform = defaultPlacements(allZero, {"s", "a", "t"}, cost);
        CHECK(uniform[1] == 0.5);

        CHECK_THROWS_AS(defaultPlacements(zeroish, {"s"}, cost), ValidationError);
        CHECK_THROWS_AS(defaultPlacements(zeroish, {"s", "nope"}, cost), ValidationError);
    }

    TEST_CASE("frames hit keyframes exactly and blend in between") {
        std::vector<ShapeRecord> keys(3);
        keys[0].id = "first";
        keys[0].vertices = {{0, 0, 0}, {1, 0, 0}};
        keys[1].id = "middle";
        keys[1].vertices = {{1, 1, 1}, {2, 1, 0}};
        keys[2].id = "last";
        keys[2].vertices = {{4, 0, 2}, {3, 3, 3}};

        const auto seq = morph(keys, {0.0, 0.25, 1.0}, 5);
        REQUIRE(seq.frames.size() == 5);
        REQUIRE(seq.naiveFrames.size() == 5);
        CHECK(seq.keyframeIds == std::vector<std::string>{"first", "middle", "last"});
        CHECK(seq.frameTimes[1] == 0.25);

        for (int v = 0; v < 2; ++v) {
            CHECK(seq.frames[0][v] == keys[0].vertices[static_cast<size_t>(v)]);
            CHECK(seq.frames[1][v] == keys[1].vertices[static_cast<size_t>(v)]);
            CHECK(seq.frames[4][v] == keys[2].vertices[static_cast<size_t>(v)]);
            CHECK(seq.naiveFrames[0][v] == keys[0].vertices[static_cast<size_t>(v)]);
            CHECK(seq.naiveFrames[4][v] == keys[2].vertices[static_cast<size_t>(v)]);
        }

        // t = 0.5 lies a third of the way into the [0.25, 1] segment
        const Eigen::Vector3d blended = (2.0 / 3.0) * Eigen::Vector3d(1, 1, 1) +
                                        (1.0 / 3.0) * Eigen::Vector3d(4, 0, 2);
        CHECK((seq.frames[2][0] - blended).norm() <= 1e-12);
        const Eigen::Vector3d naiveMid = 0.5 * Eigen::Vector3d(0, 0, 0) +
                                         0.5 * Eigen::Vector3d(4, 0, 2);
        CHECK((seq.naiveFrames[2][0] - naiveMid).norm() <= 1e-12);
    }

    TEST_CASE("rejects inconsistent requests") {
        std::vector<ShapeRecord> keys(2);
        keys[0].id = "a";
        keys[0].vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
        keys[0].faces = {{0, 1, 2}};
        keys[1].id = "b";
        keys[1].vertices = keys[0].vertices;
        keys[1].faces = keys[0].faces;

        CHECK_THROWS_AS(morph({keys[0]}, {0.0}, 5), ValidationError);
        CHECK_THROWS_AS(morph(keys, {0.0, 1.0}, 1), ValidationError);
        CHECK_THROWS_AS(morph(keys, {0.0, 0.5, 1.0}, 5), ValidationError);
        CHECK_THROWS_AS(morph(keys, {0.1, 1.0}, 5), ValidationError);
        CHECK_THROWS_AS(morph(keys, {0.0, 0.9}, 5), ValidationError);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(morph(keys, {0.0, nan}, 5), ValidationError);

        auto threeKeys = keys;
        threeKeys.push_back(keys[0]);
        threeKeys[2].id = "c";
        CHECK_THROWS_AS(morph(threeKeys, {0.0, 0.6, 0.6}, 5), ValidationError);

        auto shrunk = keys;
        shrunk[1].vertices.pop_back();
        try {
            morph(shrunk, {0.0, 1.0}, 5);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("b") != std::string::npos);
        }

        auto reordered = keys;
        reordered[1].faces = {{0, 2, 1}};
        CHECK_THROWS_AS(morph(reordered, {0.0, 1.0}, 5), ValidationError);
    }

    TEST_CASE("written sequences land on disk with a manifest") {
        std::vector<ShapeRecord> keys(2);
        keys[0].id = "start";
        keys[0].vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
        keys[0].faces = {{0, 1, 2}};
        keys[1].id = "finish";
        keys[1].vertices = {{0.5, -0.25, 3.0}, {2, 2, 2}, {-1, 0.125, 0}};
        keys[1].faces = {{0, 1, 2}};

        const auto seq = morph(keys, {0.0, 1.0}, 3);
        const auto dir = std::filesystem::temp_directory_path() / "matpath_morph_test";
        std::filesystem::remove_all(dir);
        writeMorphSequence(seq, dir);

        for (const char* name : {"frame_0000.obj", "frame_0001.obj", "frame_0002.obj",
                                 "naive_0000.obj", "naive_0001.obj", "naive_0002.obj",
                                 "manifest.json"}) {
            CHECK(std::filesystem::exists(dir / name));
        }

        const auto first = readMesh(dir / "frame_0000.obj");
        REQUIRE(first.vertices.size() == 3);
        for (size_t v = 0; v < 3; ++v) CHECK(first.vertices[v] == keys[0].vertices[v]);
        CHECK(first.faces == keys[0].faces);

        const auto middle = readMesh(dir / "frame_0001.obj");
        for (size_t v = 0; v < 3; ++v) CHECK(middle.vertices[v] == seq.frames[1][v]);

        std::ifstream manifestIn(dir / "manifest.json");
        std::stringstream buffer;
        buffer << manifestIn.rdbuf();
        CHECK(buffer.str().find("\"start\"") != std::string::npos);
        CHECK(buffer.str().find("\"frameCount\": 3") != std::string::npos);
    }
}
