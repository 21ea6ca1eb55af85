#include "matpath/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "matpath/errors.hpp"

namespace matpath {

namespace {

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parseDouble(const std::string& token, double& out) {
    try {
        size_t used = 0;
        out = std::stod(token, &used);
        return used == token.size();
    } catch (const std::exception&) {
        return false;
    }
}

// Whitespace tokens of an OFF file with '#' comments stripped.
std::vector<std::string> offTokens(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string token;
        while (ls >> token) tokens.push_back(token);
    }
    return tokens;
}

int faceIndex(const std::string& ref, Eigen::Index vertexCount) {
    // OBJ face references look like "7", "7/2", "7//3", or "7/2/3"; only the
    // vertex index matters here. Negative values count from the end.
    const std::string head = ref.substr(0, ref.find('/'));
    double value = 0.0;
    if (!parseDouble(head, value) || value != static_cast<long long>(value)) {
        throw ValidationError("bad face index: " + ref);
    }
    auto idx = static_cast<long long>(value);
    if (idx < 0) idx = static_cast<long long>(vertexCount) + 1 + idx;
    if (idx < 1 || idx > static_cast<long long>(vertexCount)) {
        throw ValidationError("face index out of range: " + ref);
    }
    return static_cast<int>(idx - 1);
}

}  // namespace

Mesh readOff(std::istream& in) {
    auto tokens = offTokens(in);
    size_t at = 0;
    auto next = [&]() -> const std::string& {
        if (at >= tokens.size()) throw ValidationError("truncated OFF data");
        return tokens[at++];
    };
    auto nextCount = [&]() {
        double v = 0.0;
        const std::string& token = next();
        if (!parseDouble(token, v) || v < 0.0 || v != static_cast<long long>(v)) {
            throw ValidationError("bad OFF count: " + token);
        }
        return static_cast<Eigen::Index>(v);
    };

    if (!tokens.empty() && lowered(tokens[0]) == "off") ++at;
    const Eigen::Index vertexCount = nextCount();
    const Eigen::Index faceCount = nextCount();
    nextCount();  // edge count, unused

    Mesh mesh;
    mesh.vertices.reserve(static_cast<size_t>(vertexCount));
    for (Eigen::Index i = 0; i < vertexCount; ++i) {
        Eigen::Vector3d v;
        for (int c = 0; c < 3; ++c) {
            const std::string& token = next();
            if (!parseDouble(token, v(c))) throw ValidationError("bad OFF coordinate: " + token);
        }
        mesh.vertices.push_back(v);
    }
    mesh.faces.reserve(static_cast<size_t>(faceCount));
    for (Eigen::Index f = 0; f < faceCount; ++f) {
        const Eigen::Index sides = nextCount();
        if (sides != 3) throw ValidationError("only triangular faces are supported");
        std::array<int, 3> tri{};
        for (int c = 0; c < 3; ++c) {
            const Eigen::Index idx = nextCount();
            if (idx >= vertexCount) throw ValidationError("OFF face index out of range");
            tri[static_cast<size_t>(c)] = static_cast<int>(idx);
        }
        mesh.faces.push_back(tri);
    }
    if (mesh.vertices.empty()) throw ValidationError("OFF mesh has no vertices");
    return mesh;
}

Mesh readObj(std::istream& in) {
    Mesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string record;
        if (!(ls >> record)) continue;
        if (record == "v") {
            Eigen::Vector3d v;
            std::string token;
            for (int c = 0; c < 3; ++c) {
                if (!(ls >> token) || !parseDouble(token, v(c))) {
                    throw ValidationError("bad OBJ vertex line: " + line);
                }
            }
            mesh.vertices.push_back(v);
        } else if (record == "f") {
            std::vector<int> refs;
            std::string token;
            while (ls >> token) {
                refs.push_back(faceIndex(token, static_cast<Eigen::Index>(mesh.vertices.size())));
            }
            if (refs.size() != 3) throw ValidationError("only triangular faces are supported");
            mesh.faces.push_back({refs[0], refs[1], refs[2]});
        }
        // Normals, texture coordinates, groups, materials: ignored.
    }
    if (mesh.vertices.empty()) throw ValidationError("OBJ mesh has no vertices");
    return mesh;
}

Mesh readMesh(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open mesh file: " + file.string());
    const std::string ext = lowered(file.extension().string());
    if (ext == ".off") return readOff(in);
    if (ext == ".obj") return readObj(in);
    throw ValidationError("unsupported mesh format: " + file.string());
}

void writeObj(const Mesh& mesh, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot write mesh file: " + file.string());
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& v : mesh.vertices) out << "v " << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
    for (const auto& f : mesh.faces) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
    if (!out.flush()) throw ValidationError("failed writing mesh file: " + file.string());
}

Eigen::MatrixXd readFeatureCsv(const std::filesystem::path& file, Eigen::Index rows) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open feature file: " + file.string());
    std::vector<std::vector<double>> data;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string stripped = trimmed(line);
        if (stripped.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(stripped);
        std::string cell;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            double v = 0.0;
            if (!parseDouble(trimmed(cell), v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;  // header line
            }
            throw ValidationError("bad feature row in " + file.string() + ": " + stripped);
        }
        first = false;
        if (!data.empty() && row.size() != data.front().size()) {
            throw ValidationError("inconsistent feature row width in " + file.string());
        }
        data.push_back(std::move(row));
    }
    if (static_cast<Eigen::Index>(data.size()) != rows) {
        std::ostringstream msg;
        msg << file.string() << " holds " << data.size() << " feature rows, expected " << rows;
        throw ValidationError(msg.str());
    }
    Eigen::MatrixXd features(rows, static_cast<Eigen::Index>(data.front().size()));
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < features.cols(); ++j) {
            features(i, j) = data[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    return features;
}

std::map<std::string, std::string> readLabelsCsv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open labels file: " + file.string());
    std::map<std::string, std::string> labels;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string stripped = trimmed(line);
        if (stripped.empty()) continue;
        if (first && lowered(stripped) == "id,label") {
            first = false;
            continue;
        }
        first = false;
        const auto comma = stripped.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("bad label row in " + file.string() + ": " + stripped);
        }
        const std::string id = trimmed(stripped.substr(0, comma));
        const std::string label = trimmed(stripped.substr(comma + 1));
        if (id.empty() || label.empty()) {
            throw ValidationError("bad label row in " + file.string() + ": " + stripped);
        }
        if (!labels.emplace(id, label).second) {
            throw ValidationError("duplicate label for shape: " + id);
        }
    }
    return labels;
}

}  // namespace matpath
