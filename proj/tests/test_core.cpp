#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "matpath/cost.hpp"
#include "matpath/edge_matrix.hpp"
#include "matpath/errors.hpp"
#include "matpath/graph.hpp"
#include "matpath/graph_json.hpp"
#include "matpath/parallel.hpp"
#include "matpath/random_graph.hpp"
#include "matpath/sinkhorn.hpp"

#include "test_support.hpp"

using namespace matpath;

TEST_SUITE("total entropy") {
    TEST_CASE("zero-one matrices have exactly zero entropy") {
        CHECK(totalEntropy(Eigen::MatrixXd::Identity(4, 4)) == 0.0);
        std::mt19937_64 rng(11);
        for (int i = 0; i < 10; ++i) {
            CHECK(totalEntropy(randomPermutationMatrix(6, rng)) == 0.0);
        }
    }

    TEST_CASE("known closed-form values") {
        const Eigen::MatrixXd u2 = Eigen::MatrixXd::Constant(2, 2, 0.5);
        CHECK(std::abs(totalEntropy(u2) - 2.0 * std::log(2.0)) < 1e-14);
        const Eigen::MatrixXd u3 = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
        CHECK(std::abs(totalEntropy(u3) - 3.0 * std::log(3.0)) < 1e-14);
        Eigen::MatrixXd m(2, 2);
        m << 0.3, 0.7, 0.7, 0.3;
        CHECK(std::abs(totalEntropy(m) - 1.2217286041097872) < 1e-14);
    }

    TEST_CASE("matches the plain-loop reference on random matrices") {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 50; ++i) {
            const Eigen::Index n = 2 + static_cast<Eigen::Index>(uniformInt(rng, 7));
            const EdgeMatrix m = randomDoublyStochastic(n, rng);
            CHECK(std::abs(totalEntropy(m) - testsupport::naiveEntropy(m.entries())) < 1e-12);
        }
    }

    TEST_CASE("negative entries beyond tolerance are rejected") {
        Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(1, 1, -1e-6);
        CHECK_THROWS_AS(totalEntropy(bad), ValidationError);
        // Within tolerance the entry counts as an exact zero.
        Eigen::MatrixXd tiny = Eigen::MatrixXd::Constant(1, 1, -5e-10);
        CHECK(totalEntropy(tiny) == 0.0);
    }

    TEST_CASE("entropy never drops under composition in either order") {
        std::mt19937_64 rng(31);
        const TotalEntropyCost cost;
        for (int i = 0; i < 100; ++i) {
            const Eigen::Index n = 2 + static_cast<Eigen::Index>(uniformInt(rng, 7));
            const EdgeMatrix a = randomDoublyStochastic(n, rng);
            const EdgeMatrix b = randomDoublyStochastic(n, rng);
            const EdgeMatrix ab = cost.compose(a, b);
            CHECK(cost.evaluate(ab) - cost.evaluate(a) >= -1e-9);
            CHECK(cost.evaluate(ab) - cost.evaluate(b) >= -1e-9);
        }
    }

    TEST_CASE("permutation factors leave the entropy unchanged") {
        std::mt19937_64 rng(37);
        const TotalEntropyCost cost;
        for (int i = 0; i < 20; ++i) {
            const EdgeMatrix m = randomDoublyStochastic(5, rng);
            const EdgeMatrix p = EdgeMatrix::doublyStochastic(randomPermutationMatrix(5, rng));
            CHECK(std::abs(cost.evaluate(cost.compose(m, p)) - cost.evaluate(m)) < 1e-12);
            CHECK(std::abs(cost.evaluate(cost.compose(p, m)) - cost.evaluate(m)) < 1e-12);
        }
    }
}

TEST_SUITE("edge matrices") {
    TEST_CASE("doubly stochastic validation") {
        Eigen::MatrixXd good(2, 2);
        good << 0.25, 0.75, 0.75, 0.25;
        CHECK(EdgeMatrix::doublyStochastic(good).isDoublyStochastic());

        Eigen::MatrixXd badSum(2, 2);
        badSum << 0.25, 0.75, 0.75, 0.25;
        badSum(0, 0) += 2e-6;
        CHECK_THROWS_AS(EdgeMatrix::doublyStochastic(badSum), ValidationError);

        Eigen::MatrixXd badEntry(2, 2);
        badEntry << 1.5, -0.5, -0.5, 1.5;
        CHECK_THROWS_AS(EdgeMatrix::doublyStochastic(badEntry), ValidationError);

        Eigen::MatrixXd rect(2, 3);
        rect.setConstant(1.0 / 3.0);
        CHECK_THROWS_AS(EdgeMatrix::doublyStochastic(rect), ValidationError);
    }

    TEST_CASE("scalar edges carry any non-negative weight") {
        CHECK(EdgeMatrix::scalar(5.0).entries()(0, 0) == 5.0);
        CHECK(EdgeMatrix::scalar(0.0).dim() == 1);
        CHECK_THROWS_AS(EdgeMatrix::scalar(-0.1), ValidationError);
    }

    TEST_CASE("composition preserves double stochasticity") {
        std::mt19937_64 rng(41);
        const EdgeMatrix a = randomDoublyStochastic(4, rng);
        const EdgeMatrix b = randomDoublyStochastic(4, rng);
        CHECK(compose(a, b).isDoublyStochastic());
        CHECK(a.transposed().isDoublyStochastic());

        const EdgeMatrix c = randomDoublyStochastic(3, rng);
        CHECK_THROWS_AS(compose(a, c), ValidationError);
    }

    TEST_CASE("product matches the plain-loop reference") {
        std::mt19937_64 rng(43);
        const EdgeMatrix a = randomDoublyStochastic(5, rng);
        const EdgeMatrix b = randomDoublyStochastic(5, rng);
        const Eigen::MatrixXd ref = testsupport::naiveCompose(a.entries(), b.entries());
        CHECK((compose(a, b).entries() - ref).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_SUITE("cost functions") {
    TEST_CASE("additive scalar cost adds weights") {
        const AdditiveScalarCost cost;
        const EdgeMatrix a = EdgeMatrix::scalar(2.0);
        const EdgeMatrix b = EdgeMatrix::scalar(3.0);
        CHECK(cost.evaluate(cost.compose(a, b)) == 5.0);
        CHECK(cost.evaluate(cost.identity(1)) == 0.0);
        CHECK(cost.transposeSymmetric());
        CHECK_THROWS_AS(cost.identity(2), ValidationError);
        CHECK_THROWS_AS(cost.evaluate(Eigen::MatrixXd::Identity(2, 2)), ValidationError);
    }

    TEST_CASE("entropy cost composes by matrix product") {
        const TotalEntropyCost cost;
        std::mt19937_64 rng(47);
        const EdgeMatrix a = randomDoublyStochastic(4, rng);
        const EdgeMatrix b = randomDoublyStochastic(4, rng);
        const Eigen::MatrixXd ref = testsupport::naiveCompose(a.entries(), b.entries());
        CHECK((cost.compose(a, b).entries() - ref).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(cost.evaluate(cost.identity(6)) == 0.0);
        CHECK(cost.transposeSymmetric());
    }

    TEST_CASE("monotonicity margin reports the worst pair") {
        const AdditiveScalarCost cost;
        std::vector<std::pair<EdgeMatrix, EdgeMatrix>> pairs;
        pairs.emplace_back(EdgeMatrix::scalar(1.0), EdgeMatrix::scalar(0.5));
        pairs.emplace_back(EdgeMatrix::scalar(2.0), EdgeMatrix::scalar(0.25));
        CHECK(monotonicityMargin(cost, pairs) == 0.25);
    }
}

TEST_SUITE("graphs") {
    TEST_CASE("pair edges define both orientations") {
        std::mt19937_64 rng(53);
        std::map<std::pair<std::string, std::string>, EdgeMatrix> edges;
        edges.emplace(std::make_pair("a", "b"), randomDoublyStochastic(3, rng));
        edges.emplace(std::make_pair("c", "a"), randomDoublyStochastic(3, rng));
        edges.emplace(std::make_pair("b", "c"), randomDoublyStochastic(3, rng));
        const MatrixGraph g = MatrixGraph::fromPairEdges({"a", "b", "c"}, edges);
        CHECK(g.nodeCount() == 3);
        CHECK(g.dim() == 3);
        CHECK((g.edge("a", "b").entries() - g.edge("b", "a").entries().transpose())
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
        // The (c, a) key is read c -> a, so edge(a, c) is its transpose.
        CHECK((g.edge("c", "a").entries() - edges.at({"c", "a"}).entries())
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
        CHECK(g.nodeIndex("b") == 1);
        CHECK(!g.findNode("zz").has_value());
        CHECK_THROWS_AS(g.nodeIndex("zz"), ValidationError);
        CHECK_THROWS_AS(g.edge(0, 0), ValidationError);
    }

    TEST_CASE("construction rejects malformed inputs") {
        std::mt19937_64 rng(59);
        std::map<std::pair<std::string, std::string>, EdgeMatrix> edges;
        edges.emplace(std::make_pair("a", "b"), randomDoublyStochastic(3, rng));

        SUBCASE("missing pair") {
            CHECK_THROWS_AS(MatrixGraph::fromPairEdges({"a", "b", "c"}, edges), ValidationError);
        }
        SUBCASE("duplicate pair across orientations") {
            edges.emplace(std::make_pair("b", "a"), randomDoublyStochastic(3, rng));
            CHECK_THROWS_AS(MatrixGraph::fromPairEdges({"a", "b"}, edges), ValidationError);
        }
        SUBCASE("unknown node in an edge") {
            edges.emplace(std::make_pair("a", "z"), randomDoublyStochastic(3, rng));
            CHECK_THROWS_AS(MatrixGraph::fromPairEdges({"a", "b"}, edges), ValidationError);
        }
        SUBCASE("inconsistent dimensions") {
            edges.emplace(std::make_pair("a", "c"), randomDoublyStochastic(4, rng));
            edges.emplace(std::make_pair("b", "c"), randomDoublyStochastic(3, rng));
            CHECK_THROWS_AS(MatrixGraph::fromPairEdges({"a", "b", "c"}, edges), ValidationError);
        }
        SUBCASE("duplicate node id") {
            CHECK_THROWS_AS(MatrixGraph::fromPairEdges({"a", "a"}, edges), ValidationError);
        }
    }

    TEST_CASE("ordered edges must match as transposes") {
        std::mt19937_64 rng(61);
        const EdgeMatrix m = randomDoublyStochastic(3, rng);
        std::map<std::pair<std::string, std::string>, EdgeMatrix> edges;
        edges.emplace(std::make_pair("a", "b"), m);
        edges.emplace(std::make_pair("b", "a"), m.transposed());
        CHECK(MatrixGraph::fromOrderedEdges({"a", "b"}, edges).nodeCount() == 2);

        edges.erase({"b", "a"});
        edges.emplace(std::make_pair("b", "a"), randomDoublyStochastic(3, rng));
        CHECK_THROWS_AS(MatrixGraph::fromOrderedEdges({"a", "b"}, edges), ValidationError);
    }

    TEST_CASE("path composition walks edges left to right") {
        const MatrixGraph g = testsupport::scalarGraph(
            {"a", "b", "c"},
            {{{"a", "b"}, 1.5}, {{"a", "c"}, 4.0}, {{"b", "c"}, 2.25}});
        const AdditiveScalarCost cost;
        const Path p = composePath(g, {"a", "b", "c"}, cost);
        CHECK(p.cost == 3.75);
        CHECK(p.edgeCount() == 2);

        const Path trivial = composePath(g, {"b"}, cost);
        CHECK(trivial.cost == 0.0);
        CHECK(trivial.edgeCount() == 0);

        CHECK_THROWS_AS(composePath(g, {"a", "z"}, cost), ValidationError);
        CHECK_THROWS_AS(composePath(g, {"a", "b", "a"}, cost), ValidationError);
        CHECK_THROWS_AS(composePath(g, {}, cost), ValidationError);
    }

    TEST_CASE("entropy path composition matches the reference chain") {
        const MatrixGraph g = randomGraph(4, 3, 67);
        const TotalEntropyCost cost;
        const Path p = composePath(g, {"n00", "n02", "n01", "n03"}, cost);
        Eigen::MatrixXd ref = g.edge("n00", "n02").entries();
        ref = testsupport::naiveCompose(ref, g.edge("n02", "n01").entries());
        ref = testsupport::naiveCompose(ref, g.edge("n01", "n03").entries());
        CHECK(std::abs(p.cost - testsupport::naiveEntropy(ref)) < 1e-12);
    }

    TEST_CASE("path comparison prefers cheaper, then lexicographic") {
        const std::vector<std::string> ab{"a", "b"};
        const std::vector<std::string> ac{"a", "c"};
        CHECK(pathBeats(1.0, ac, 2.0, ab));
        CHECK(!pathBeats(2.0, ab, 1.0, ac));
        CHECK(pathBeats(1.0, ab, 1.0 + 5e-13, ac));
        CHECK(!pathBeats(1.0 + 5e-13, ac, 1.0, ab));
        CHECK(pathBeats(3.0, ab, std::numeric_limits<double>::infinity(), {}));
        // Identical sequences never beat themselves.
        CHECK(!pathBeats(1.0, ab, 1.0, ab));
    }
}

TEST_SUITE("graph files") {
    TEST_CASE("serialization round-trips byte for byte") {
        const MatrixGraph g = randomGraph(5, 3, 71);
        const std::string first = graphToJson(g);
        const std::string second = graphToJson(parseGraphJson(first));
        CHECK(first == second);
    }

    TEST_CASE("scalar graphs round-trip through dimension one") {
        const MatrixGraph g = randomScalarGraph(4, 73);
        const MatrixGraph back = parseGraphJson(graphToJson(g));
        CHECK(back.dim() == 1);
        CHECK(back.edge("n00", "n01").entries()(0, 0) == g.edge("n00", "n01").entries()(0, 0));
    }

    TEST_CASE("edge keys must be sorted and complete") {
        CHECK_THROWS_AS(parseGraphJson(R"({"n":1,"nodes":["a","b"],)"
                                       R"("edges":[{"from":"b","to":"a","matrix":[[1.0]]}]})"),
                        ValidationError);
        CHECK_THROWS_AS(parseGraphJson(R"({"n":1,"nodes":["a","b"],"edges":[]})"),
                        ValidationError);
        CHECK_THROWS_AS(parseGraphJson("not json at all"), ValidationError);
        CHECK_THROWS_AS(
            parseGraphJson(R"({"n":2,"nodes":["a","b"],)"
                           R"("edges":[{"from":"a","to":"b","matrix":[[1.0]]}]})"),
            ValidationError);
    }

    TEST_CASE("files survive a save and load cycle") {
        const MatrixGraph g = randomGraph(4, 2, 79);
        const auto file = std::filesystem::temp_directory_path() / "matpath_graph_test.json";
        saveGraph(g, file);
        const MatrixGraph back = loadGraph(file);
        CHECK(graphToJson(back) == graphToJson(g));
        std::filesystem::remove(file);
        CHECK_THROWS_AS(loadGraph(file), ValidationError);
    }
}

TEST_SUITE("marginal normalization") {
    TEST_CASE("the classic symmetric example lands on thirds") {
        Eigen::MatrixXd m(2, 2);
        m << 2.0, 1.0, 1.0, 2.0;
        const EdgeMatrix out = sinkhornNormalize(m);
        Eigen::MatrixXd expected(2, 2);
        expected << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
        CHECK((out.entries() - expected).cwiseAbs().maxCoeff() < 1e-9);
    }

    TEST_CASE("matches the plain-loop reference") {
        std::mt19937_64 rng(83);
        for (int i = 0; i < 20; ++i) {
            const Eigen::Index n = 2 + static_cast<Eigen::Index>(uniformInt(rng, 6));
            Eigen::MatrixXd m(n, n);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c) m(r, c) = 0.05 + uniformDouble(rng);
            const EdgeMatrix fast = sinkhornNormalize(m);
            const Eigen::MatrixXd slow = testsupport::naiveSinkhorn(m, 1e-8, 10000);
            CHECK((fast.entries() - slow).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(fast.isDoublyStochastic());
            // Marginals actually meet the tighter convergence tolerance.
            CHECK((fast.entries().rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-8);
            CHECK((fast.entries().colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-8);
        }
    }

    TEST_CASE("input validation") {
        CHECK_THROWS_AS(sinkhornNormalize(Eigen::MatrixXd::Constant(2, 3, 1.0)), ValidationError);
        Eigen::MatrixXd zero(2, 2);
        zero << 1.0, 0.0, 1.0, 1.0;
        CHECK_THROWS_AS(sinkhornNormalize(zero), ValidationError);
        Eigen::MatrixXd fine = Eigen::MatrixXd::Constant(2, 2, 1.0);
        CHECK_THROWS_AS(sinkhornNormalize(fine, {.tol = 1e-5}), ValidationError);
        CHECK_THROWS_AS(sinkhornNormalize(fine, {.tol = 1e-8, .maxIter = 0}), ValidationError);
    }

    TEST_CASE("iteration budget overruns raise a convergence error") {
        Eigen::MatrixXd m(2, 2);
        m << 1.0, 2.0, 3.0, 4.0;
        CHECK_THROWS_AS(sinkhornNormalize(m, {.tol = 1e-8, .maxIter = 1}), ConvergenceError);
    }
}

TEST_SUITE("random instances") {
    TEST_CASE("uniform doubles stay in range and reproduce by seed") {
        std::mt19937_64 a(91), b(91), c(92);
        bool allEqual = true;
        bool anyDiffer = false;
        for (int i = 0; i < 1000; ++i) {
            const double x = uniformDouble(a);
            CHECK(x >= 0.0);
            CHECK(x < 1.0);
            allEqual = allEqual && x == uniformDouble(b);
            anyDiffer = anyDiffer || x != uniformDouble(c);
        }
        CHECK(allEqual);
        CHECK(anyDiffer);
    }

    TEST_CASE("bounded integers cover the whole range") {
        std::mt19937_64 rng(97);
        std::vector<int> seen(7, 0);
        for (int i = 0; i < 1000; ++i) ++seen[static_cast<size_t>(uniformInt(rng, 7))];
        for (const int count : seen) CHECK(count > 0);
    }

    TEST_CASE("permutation matrices are exact") {
        std::mt19937_64 rng(101);
        const Eigen::MatrixXd p = randomPermutationMatrix(7, rng);
        CHECK((p * p.transpose() - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((p.array() * (1.0 - p.array())).abs().maxCoeff() == 0.0);
    }

    TEST_CASE("random graphs are complete, symmetric, and reproducible") {
        const MatrixGraph g = randomGraph(6, 3, 103);
        for (int i = 0; i < g.nodeCount(); ++i) {
            for (int j = 0; j < g.nodeCount(); ++j) {
                if (i == j) continue;
                CHECK(g.edge(i, j).isDoublyStochastic());
                CHECK((g.edge(i, j).entries() - g.edge(j, i).entries().transpose())
                          .cwiseAbs()
                          .maxCoeff() == 0.0);
            }
        }
        CHECK(graphToJson(g) == graphToJson(randomGraph(6, 3, 103)));
        CHECK(graphToJson(g) != graphToJson(randomGraph(6, 3, 104)));

        const MatrixGraph sharp = randomGraph(5, 4, 107, MatrixEnsemble::permutationNoise);
        for (int i = 1; i < sharp.nodeCount(); ++i) CHECK(sharp.edge(0, i).isDoublyStochastic());
    }

    TEST_CASE("scalar graphs draw positive bounded weights") {
        const MatrixGraph g = randomScalarGraph(5, 109);
        CHECK(g.dim() == 1);
        for (int i = 0; i < g.nodeCount(); ++i) {
            for (int j = i + 1; j < g.nodeCount(); ++j) {
                const double w = g.edge(i, j).entries()(0, 0);
                CHECK(w > 0.0);
                CHECK(w <= 10.0);
            }
        }
    }
}

TEST_SUITE("parallel execution") {
    TEST_CASE("every index runs exactly once") {
        for (const unsigned threads : {1u, 4u, 16u}) {
            std::vector<std::atomic<int>> hits(100);
            for (auto& h : hits) h = 0;
            parallelFor(100, threads, [&](int i) { ++hits[static_cast<size_t>(i)]; });
            for (const auto& h : hits) CHECK(h == 1);
        }
        parallelFor(0, 4, [](int) { FAIL("no work expected"); });
    }

    TEST_CASE("worker exceptions reach the caller") {
        CHECK_THROWS_AS(parallelFor(8, 4,
                                    [](int i) {
                                        if (i == 5) throw std::runtime_error("boom");
                                    }),
                        std::runtime_error);
    }
}
