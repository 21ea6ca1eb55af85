#pragma once

#include <filesystem>
#include <string>

#include "matpath/graph.hpp"

namespace matpath {

// Graph file schema: {"n": dim, "nodes": [...], "edges": [{"from", "to",
// "matrix"}]} with one entry per unordered pair, from < to lexicographically,
// and the matrix read in from -> to direction. Numbers round-trip exactly.
// Dimension 1 edges are scalar weights; larger dimensions are validated as
// doubly stochastic on load.
std::string graphToJson(const MatrixGraph& graph);
MatrixGraph parseGraphJson(const std::string& text);

void saveGraph(const MatrixGraph& graph, const std::filesystem::path& file);
MatrixGraph loadGraph(const std::filesystem::path& file);

}  // namespace matpath
