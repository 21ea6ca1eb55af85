#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace matpath {

struct Mesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;  // triangle indices, 0-based
};

// Reads a triangle mesh, dispatching on the file extension (.off or .obj,
// case-insensitive). OFF: header, counts, vertex lines, "3 a b c" face lines.
// OBJ: "v x y z" and "f a b c" records (1-based indices, "a/t/n" slash forms
// accepted); every other record type is ignored.
Mesh readMesh(const std::filesystem::path& file);
Mesh readOff(std::istream& in);
Mesh readObj(std::istream& in);

// Writes v/f records with full round-trip precision.
void writeObj(const Mesh& mesh, const std::filesystem::path& file);

// CSV of per-vertex feature rows; a leading non-numeric line is treated as a
// header. Must hold exactly `rows` data rows of one consistent width.
Eigen::MatrixXd readFeatureCsv(const std::filesystem::path& file, Eigen::Index rows);

// Two-column CSV mapping shape id to family label; "id,label" header optional.
std::map<std::string, std::string> readLabelsCsv(const std::filesystem::path& file);

}  // namespace matpath
