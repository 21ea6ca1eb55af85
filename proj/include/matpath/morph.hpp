#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "matpath/builder.hpp"
#include "matpath/solver.hpp"

namespace matpath {

// Piecewise-linear morph through an ordered list of same-topology keyframes.
// Frames sampled at a keyframe's placement are bit-exact copies of that
// keyframe's vertices; `naiveFrames` blends source to target directly for
// side-by-side comparison.
struct MorphSequence {
    std::vector<std::string> keyframeIds;
    std::vector<double> placements;  // strictly increasing, 0 at source, 1 at target
    std::vector<double> frameTimes;  // uniform in [0, 1]
    std::vector<std::vector<Eigen::Vector3d>> frames;
    std::vector<std::vector<Eigen::Vector3d>> naiveFrames;
    std::vector<std::array<int, 3>> faces;  // shared by every frame
};

// Placement of each keyframe on [0, 1] by cumulative direct-edge cost between
// consecutive keyframes, normalized. Each step gets a small floor so the
// result is strictly increasing even across identical shapes; when the total
// is zero the spacing falls back to uniform.
std::vector<double> defaultPlacements(const MatrixGraph& graph,
                                      const std::vector<std::string>& pathNodes,
                                      const CostFunction& cost);

MorphSequence morph(const std::vector<ShapeRecord>& keyframes,
                    const std::vector<double>& placements, int frameCount = 100);

// frame_0000.obj ... plus naive_0000.obj ... and manifest.json in `dir`.
void writeMorphSequence(const MorphSequence& sequence, const std::filesystem::path& dir);

// Interior nodes of the shortest path from source to target: the collection
// members passed through. Empty when the direct edge is optimal. `fixedK`
// requests exactly that edge count instead of the unrestricted optimum.
std::vector<std::string> intermediateShapes(const MatrixGraph& graph, const std::string& source,
                                            const std::string& target,
                                            std::optional<int> fixedK = std::nullopt,
                                            const SolverConfig& config = {});

}  // namespace matpath
