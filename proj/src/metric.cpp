#include "matpath/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "matpath/errors.hpp"

namespace matpath {

int DistanceTable::nodeIndex(const std::string& id) const {
    const auto it = std::find(nodes.begin(), nodes.end(), id);
    if (it == nodes.end()) throw ValidationError("unknown node: " + id);
    return static_cast<int>(it - nodes.begin());
}

const Path& DistanceTable::pathBetween(const std::string& from, const std::string& to) const {
    if (paths.empty()) throw ValidationError("this table was loaded without paths");
    return paths[static_cast<size_t>(nodeIndex(from))][static_cast<size_t>(nodeIndex(to))];
}

DistanceTable shapeDistanceTable(const MatrixGraph& graph, const SolverConfig& config,
                                 unsigned threads) {
    AllPairsResult all = allPairs(graph, config, threads);
    DistanceTable table;
    table.nodes = std::move(all.nodes);
    table.certified = all.certified;
    const auto count = static_cast<Eigen::Index>(table.nodes.size());
    table.dist.resize(count, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = 0; j < count; ++j) {
            table.dist(i, j) = all.path[static_cast<size_t>(i)][static_cast<size_t>(j)].cost;
        }
    }
    table.paths = std::move(all.path);
    return table;
}

std::string distanceTableToJson(const DistanceTable& table) {
    nlohmann::ordered_json doc;
    doc["nodes"] = table.nodes;
    doc["certified"] = table.certified;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < table.dist.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < table.dist.cols(); ++j) row.push_back(table.dist(i, j));
        rows.push_back(std::move(row));
    }
    doc["dist"] = std::move(rows);
    return doc.dump();
}

DistanceTable distanceTableFromJson(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad distance table: ") + e.what());
    }
    DistanceTable table;
    try {
        table.nodes = doc.at("nodes").get<std::vector<std::string>>();
        table.certified = doc.value("certified", false);
        const auto& rows = doc.at("dist");
        const auto count = static_cast<Eigen::Index>(table.nodes.size());
        if (static_cast<Eigen::Index>(rows.size()) != count) {
            throw ValidationError("distance table row count mismatch");
        }
        table.dist.resize(count, count);
        for (Eigen::Index i = 0; i < count; ++i) {
            const auto& row = rows.at(static_cast<size_t>(i));
            if (static_cast<Eigen::Index>(row.size()) != count) {
                throw ValidationError("distance table column count mismatch");
            }
            for (Eigen::Index j = 0; j < count; ++j) {
                table.dist(i, j) = row.at(static_cast<size_t>(j)).get<double>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad distance table: ") + e.what());
    }
    if (table.nodes.size() < 2) throw ValidationError("distance table needs at least 2 nodes");
    return table;
}

void saveDistanceTable(const DistanceTable& table, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot write distance table: " + file.string());
    out << distanceTableToJson(table) << '\n';
    if (!out.flush()) throw ValidationError("failed writing distance table: " + file.string());
}

DistanceTable loadDistanceTable(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open distance table: " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return distanceTableFromJson(buffer.str());
}

std::vector<std::string> nearestNeighbors(const DistanceTable& table, const std::string& query,
                                          int k) {
    const int q = table.nodeIndex(query);
    const int count = static_cast<int>(table.nodes.size());
    if (k < 1 || k > count - 1) {
        std::ostringstream msg;
        msg << "neighbor count " << k << " outside [1, " << count - 1 << "]";
        throw ValidationError(msg.str());
    }
    std::vector<int> order;
    order.reserve(static_cast<size_t>(count) - 1);
    for (int i = 0; i < count; ++i) {
        if (i != q) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double da = table.dist(q, a);
        const double db = table.dist(q, b);
        if (da != db) return da < db;
        return table.nodes[static_cast<size_t>(a)] < table.nodes[static_cast<size_t>(b)];
    });
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(table.nodes[static_cast<size_t>(order[static_cast<size_t>(i)])]);
    return out;
}

RetrievalEval evaluateRetrieval(const DistanceTable& table,
                                const std::map<std::string, std::string>& labels) {
    const int count = static_cast<int>(table.nodes.size());
    RetrievalEval eval;
    eval.nodes = table.nodes;
    eval.labels.reserve(static_cast<size_t>(count));
    for (const auto& id : table.nodes) {
        const auto it = labels.find(id);
        if (it == labels.end()) throw ValidationError("missing label for shape: " + id);
        eval.labels.push_back(it->second);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    eval.g.resize(count, count - 1);
    for (int i = 0; i < count; ++i) {
        int family = 0;  // other members sharing the query's label
        for (int j = 0; j < count; ++j) {
            if (j != i && eval.labels[static_cast<size_t>(j)] == eval.labels[static_cast<size_t>(i)]) {
                ++family;
            }
        }
        if (family == 0) {
            eval.g.row(i).setConstant(nan);
            continue;
        }
        const auto neighbors = nearestNeighbors(table, table.nodes[static_cast<size_t>(i)],
                                                count - 1);
        int truePositives = 0;
        for (int k = 1; k <= count - 1; ++k) {
            const auto& id = neighbors[static_cast<size_t>(k - 1)];
            if (labels.at(id) == eval.labels[static_cast<size_t>(i)]) ++truePositives;
            eval.g(i, k - 1) =
                static_cast<double>(truePositives) / static_cast<double>(std::min(family, k));
        }
    }

    eval.meanPerK.resize(static_cast<size_t>(count - 1));
    eval.stdPerK.resize(static_cast<size_t>(count - 1));
    eval.definedPerK.resize(static_cast<size_t>(count - 1));
    for (int k = 0; k < count - 1; ++k) {
        double sum = 0.0;
        int defined = 0;
        for (int i = 0; i < count; ++i) {
            if (!std::isnan(eval.g(i, k))) {
                sum += eval.g(i, k);
                ++defined;
            }
        }
        const double mean = defined > 0 ? sum / defined : nan;
        double varSum = 0.0;
        for (int i = 0; i < count; ++i) {
            if (!std::isnan(eval.g(i, k))) varSum += (eval.g(i, k) - mean) * (eval.g(i, k) - mean);
        }
        eval.meanPerK[static_cast<size_t>(k)] = mean;
        eval.stdPerK[static_cast<size_t>(k)] = defined > 0 ? std::sqrt(varSum / defined) : nan;
        eval.definedPerK[static_cast<size_t>(k)] = defined;
    }
    return eval;
}

namespace {

std::string formatted(double v) {
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return out.str();
}

}  // namespace

std::string retrievalSummaryCsv(const RetrievalEval& eval) {
    std::ostringstream out;
    out << "k,mean_g,std_g\n";
    for (size_t k = 0; k < eval.meanPerK.size(); ++k) {
        out << k + 1 << ',' << formatted(eval.meanPerK[k]) << ',' << formatted(eval.stdPerK[k])
            << '\n';
    }
    return out.str();
}

std::string retrievalPerQueryCsv(const RetrievalEval& eval) {
    std::ostringstream out;
    out << "query,k,g\n";
    for (size_t i = 0; i < eval.nodes.size(); ++i) {
        for (Eigen::Index k = 0; k < eval.g.cols(); ++k) {
            const double v = eval.g(static_cast<Eigen::Index>(i), k);
            out << eval.nodes[i] << ',' << k + 1 << ','
                << (std::isnan(v) ? std::string("undefined") : formatted(v)) << '\n';
        }
    }
    return out.str();
}

}  // namespace matpath
