#include "matpath/morph.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "matpath/errors.hpp"
#include "matpath/mesh_io.hpp"

namespace matpath {

namespace {

constexpr double kSnapTol = 1e-12;  // sample-to-placement match window

std::string frameName(const char* prefix, size_t index) {
    std::ostringstream name;
    name << prefix << '_' << std::setw(4) << std::setfill('0') << index << ".obj";
    return name.str();
}

std::vector<Eigen::Vector3d> blend(const std::vector<Eigen::Vector3d>& a,
                                   const std::vector<Eigen::Vector3d>& b, double w) {
    std::vector<Eigen::Vector3d> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
    return out;
}

}  // namespace

std::vector<double> defaultPlacements(const MatrixGraph& graph,
                                      const std::vector<std::string>& pathNodes,
                                      const CostFunction& cost) {
    if (pathNodes.size() < 2) throw ValidationError("placements need at least 2 path nodes");
    std::vector<double> weights;
    weights.reserve(pathNodes.size() - 1);
    double total = 0.0;
    for (size_t i = 0; i + 1 < pathNodes.size(); ++i) {
        const double w = cost.evaluate(graph.edge(pathNodes[i], pathNodes[i + 1]));
        weights.push_back(w);
        total += w;
    }
    std::vector<double> placements(pathNodes.size());
    placements.front() = 0.0;
    if (total <= 0.0) {
        for (size_t i = 0; i < pathNodes.size(); ++i) {
            placements[i] = static_cast<double>(i) / static_cast<double>(pathNodes.size() - 1);
        }
    } else {
        // A per-step floor keeps the sequence strictly increasing even when
        // consecutive keyframes are indistinguishable (zero-cost edge).
        double running = 0.0;
        double floored = 0.0;
        for (const double w : weights) floored += w + total * 1e-9;
        for (size_t i = 0; i + 1 < weights.size(); ++i) {
            running += weights[i] + total * 1e-9;
            placements[i + 1] = running / floored;
        }
    }
    placements.back() = 1.0;
    return placements;
}

MorphSequence morph(const std::vector<ShapeRecord>& keyframes,
                    const std::vector<double>& placements, int frameCount) {
    if (keyframes.size() < 2) throw ValidationError("morph needs at least 2 keyframes");
    if (frameCount < 2) throw ValidationError("morph needs at least 2 frames");
    if (placements.size() != keyframes.size()) {
        throw ValidationError("one placement per keyframe required");
    }
    if (placements.front() != 0.0 || placements.back() != 1.0) {
        throw ValidationError("placements must start at 0 and end at 1");
    }
    for (size_t i = 0; i + 1 < placements.size(); ++i) {
        if (!(placements[i] < placements[i + 1])) {
            throw ValidationError("placements must be strictly increasing");
        }
    }
    const auto& first = keyframes.front();
    for (const auto& frame : keyframes) {
        if (frame.vertices.size() != first.vertices.size()) {
            throw ValidationError("keyframe " + frame.id + " differs in vertex count");
        }
        if (frame.faces != first.faces) {
            throw ValidationError("keyframe " + frame.id + " differs in face topology");
        }
    }

    MorphSequence out;
    for (const auto& frame : keyframes) out.keyframeIds.push_back(frame.id);
    out.placements = placements;
    out.faces = first.faces;
    out.frameTimes.reserve(static_cast<size_t>(frameCount));
    out.frames.reserve(static_cast<size_t>(frameCount));
    out.naiveFrames.reserve(static_cast<size_t>(frameCount));

    for (int j = 0; j < frameCount; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(frameCount - 1);
        out.frameTimes.push_back(t);

        // A sample on a keyframe placement is that keyframe, bit for bit.
        int snapped = -1;
        for (size_t i = 0; i < placements.size(); ++i) {
            if (std::abs(t - placements[i]) <= kSnapTol) {
                snapped = static_cast<int>(i);
                break;
            }
        }
        if (snapped >= 0) {
            out.frames.push_back(keyframes[static_cast<size_t>(snapped)].vertices);
        } else {
            size_t seg = 0;
            while (placements[seg + 1] < t) ++seg;
            const double w = (t - placements[seg]) / (placements[seg + 1] - placements[seg]);
            out.frames.push_back(
                blend(keyframes[seg].vertices, keyframes[seg + 1].vertices, w));
        }

        if (j == 0) {
            out.naiveFrames.push_back(first.vertices);
        } else if (j == frameCount - 1) {
            out.naiveFrames.push_back(keyframes.back().vertices);
        } else {
            out.naiveFrames.push_back(blend(first.vertices, keyframes.back().vertices, t));
        }
    }
    return out;
}

void writeMorphSequence(const MorphSequence& sequence, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (size_t j = 0; j < sequence.frames.size(); ++j) {
        writeObj(Mesh{sequence.frames[j], sequence.faces}, dir / frameName("frame", j));
        writeObj(Mesh{sequence.naiveFrames[j], sequence.faces}, dir / frameName("naive", j));
    }
    nlohmann::ordered_json manifest;
    manifest["keyframes"] = sequence.keyframeIds;
    manifest["placements"] = sequence.placements;
    manifest["frameCount"] = sequence.frames.size();
    std::ofstream out(dir / "manifest.json");
    if (!out) throw ValidationError("cannot write morph manifest in " + dir.string());
    out << manifest.dump(2) << '\n';
    if (!out.flush()) throw ValidationError("failed writing morph manifest in " + dir.string());
}

std::vector<std::string> intermediateShapes(const MatrixGraph& graph, const std::string& source,
                                            const std::string& target, std::optional<int> fixedK,
                                            const SolverConfig& config) {
    if (source == target) throw ValidationError("source and target must differ");
    std::vector<std::string> nodes;
    if (fixedK) {
        nodes = fixedKPath(graph, source, target, *fixedK, config).nodes;
    } else {
        const ShortestPathResult result = shortestPathsFrom(graph, source, config);
        nodes = result.best[static_cast<size_t>(graph.nodeIndex(target))].nodes;
    }
    return {nodes.begin() + 1, nodes.end() - 1};
}

}  // namespace matpath
