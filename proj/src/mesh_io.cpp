#include "see/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace see {
namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw MeshLoadError(path.string() + ": " + what);
}

void fan(std::vector<Triangle>& triangles, const std::vector<std::uint32_t>& polygon) {
    for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
        triangles.push_back({polygon[0], polygon[i], polygon[i + 1]});
    }
}

TriangleMesh finish(const std::filesystem::path& path, std::vector<Vec3> vertices, std::vector<Triangle> triangles) {
    try {
        return TriangleMesh(std::move(vertices), std::move(triangles));
    } catch (const InputError& e) {
        fail(path, e.what());
    }
}

// PLY scalar types by byte size.
enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType parse_ply_type(const std::string& name, const std::filesystem::path& path) {
    if (name == "char" || name == "int8") return PlyType::i8;
    if (name == "uchar" || name == "uint8") return PlyType::u8;
    if (name == "short" || name == "int16") return PlyType::i16;
    if (name == "ushort" || name == "uint16") return PlyType::u16;
    if (name == "int" || name == "int32") return PlyType::i32;
    if (name == "uint" || name == "uint32") return PlyType::u32;
    if (name == "float" || name == "float32") return PlyType::f32;
    if (name == "double" || name == "float64") return PlyType::f64;
    fail(path, "unknown PLY type '" + name + "'");
}


template <class T>
T read_raw(std::istream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

double read_binary(std::istream& in, PlyType t) {
    switch (t) {
    case PlyType::i8: return read_raw<std::int8_t>(in);
    case PlyType::u8: return read_raw<std::uint8_t>(in);
    case PlyType::i16: return read_raw<std::int16_t>(in);
    case PlyType::u16: return read_raw<std::uint16_t>(in);
    case PlyType::i32: return read_raw<std::int32_t>(in);
    case PlyType::u32: return read_raw<std::uint32_t>(in);
    case PlyType::f32: return read_raw<float>(in);
    case PlyType::f64: return read_raw<double>(in);
    }
    return 0.0;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::f32;
    bool is_list = false;
    PlyType count_type = PlyType::u8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

} // namespace

TriangleMesh load_obj(const std::filesystem::path& path, double scale) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::uint32_t> polygon;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) fail(path, "line " + std::to_string(line_no) + ": malformed vertex");
            vertices.emplace_back(x * scale, y * scale, z * scale);
        } else if (tag == "f") {
            polygon.clear();
            std::string ref;
            while (ls >> ref) {
                // v, v/vt, v//vn or v/vt/vn; negative indices count back from the end.
                long idx = 0;
                try {
                    idx = std::stol(ref.substr(0, ref.find('/')));
                } catch (const std::exception&) {
                    fail(path, "line " + std::to_string(line_no) + ": bad face index '" + ref + "'");
                }
                const long resolved = idx > 0 ? idx - 1 : static_cast<long>(vertices.size()) + idx;
                if (idx == 0 || resolved < 0 || resolved >= static_cast<long>(vertices.size())) {
                    fail(path, "line " + std::to_string(line_no) + ": face index out of range");
                }
                polygon.push_back(static_cast<std::uint32_t>(resolved));
            }
            if (polygon.size() < 3) fail(path, "line " + std::to_string(line_no) + ": face with fewer than 3 vertices");
            fan(triangles, polygon);
        }
    }
    return finish(path, std::move(vertices), std::move(triangles));
}

TriangleMesh load_ply(const std::filesystem::path& path, double scale) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line) || lower(line).rfind("ply", 0) != 0) fail(path, "missing 'ply' magic");

    bool binary = false;
    std::vector<PlyElement> elements;
    while (true) {
        if (!std::getline(in, line)) fail(path, "unterminated header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii") {
                binary = false;
            } else if (fmt == "binary_little_endian") {
                binary = true;
            } else {
                fail(path, "unsupported PLY format '" + fmt + "'");
            }
        } else if (word == "element") {
            PlyElement e;
            ls >> e.name >> e.count;
            elements.push_back(e);
        } else if (word == "property") {
            if (elements.empty()) fail(path, "property before element");
            PlyProperty p;
            std::string type;
            ls >> type;
            if (type == "list") {
                std::string count_type, item_type;
                ls >> count_type >> item_type >> p.name;
                p.is_list = true;
                p.count_type = parse_ply_type(count_type, path);
                p.type = parse_ply_type(item_type, path);
            } else {
                p.type = parse_ply_type(type, path);
                ls >> p.name;
            }
            elements.back().properties.push_back(p);
        } else if (word == "end_header") {
            break;
        }
    }

    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::vector<double> row;
    std::vector<std::uint32_t> polygon;
    std::vector<std::vector<double>> lists;

    for (const PlyElement& e : elements) {
        int xi = -1, yi = -1, zi = -1, face_list = -1;
        for (std::size_t k = 0; k < e.properties.size(); ++k) {
            const PlyProperty& p = e.properties[k];
            if (p.name == "x") xi = static_cast<int>(k);
            if (p.name == "y") yi = static_cast<int>(k);
            if (p.name == "z") zi = static_cast<int>(k);
            if (p.is_list && (p.name == "vertex_indices" || p.name == "vertex_index")) face_list = static_cast<int>(k);
        }
        const bool is_vertex = e.name == "vertex";
        const bool is_face = e.name == "face";
        if (is_vertex && (xi < 0 || yi < 0 || zi < 0)) fail(path, "vertex element lacks x/y/z");

        for (std::size_t n = 0; n < e.count; ++n) {
            row.assign(e.properties.size(), 0.0);
            lists.assign(e.properties.size(), {});
            if (binary) {
                for (std::size_t k = 0; k < e.properties.size(); ++k) {
                    const PlyProperty& p = e.properties[k];
                    if (p.is_list) {
                        const auto len = static_cast<std::size_t>(read_binary(in, p.count_type));
                        for (std::size_t j = 0; j < len; ++j) lists[k].push_back(read_binary(in, p.type));
                    } else {
                        row[k] = read_binary(in, p.type);
                    }
                }
                if (!in) fail(path, "truncated binary body in element '" + e.name + "'");
            } else {
                if (!std::getline(in, line)) fail(path, "truncated ASCII body in element '" + e.name + "'");
                std::istringstream ls(line);
                for (std::size_t k = 0; k < e.properties.size(); ++k) {
                    const PlyProperty& p = e.properties[k];
                    if (p.is_list) {
                        double len = 0;
                        ls >> len;
                        for (std::size_t j = 0; j < static_cast<std::size_t>(len); ++j) {
                            double v;
                            ls >> v;
                            lists[k].push_back(v);
                        }
                    } else {
                        ls >> row[k];
                    }
                }
                if (!ls) fail(path, "malformed ASCII row in element '" + e.name + "'");
            }
            if (is_vertex) {
                vertices.emplace_back(row[xi] * scale, row[yi] * scale, row[zi] * scale);
            } else if (is_face && face_list >= 0) {
                polygon.clear();
                for (double v : lists[face_list]) {
                    if (v < 0) fail(path, "negative face index");
                    polygon.push_back(static_cast<std::uint32_t>(v));
                }
                if (polygon.size() < 3) fail(path, "face with fewer than 3 vertices");
                fan(triangles, polygon);
            }
        }
    }
    return finish(path, std::move(vertices), std::move(triangles));
}

TriangleMesh load_mesh(const std::filesystem::path& path, double scale) {
    if (!(scale > 0.0)) throw InputError("mesh scale must be positive");
    if (!std::filesystem::exists(path)) fail(path, "no such file");
    const std::string ext = lower(path.extension().string());
    if (ext == ".obj") return load_obj(path, scale);
    if (ext == ".ply") return load_ply(path, scale);
    fail(path, "unsupported mesh extension '" + ext + "'");
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(17);
    for (const Vec3& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const Triangle& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void save_ply(const TriangleMesh& mesh, const std::filesystem::path& path, PlyEncoding encoding) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const bool binary = encoding == PlyEncoding::binary_little_endian;
    out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n"
        << "element vertex " << mesh.vertices().size() << "\n"
        << "property double x\nproperty double y\nproperty double z\n"
        << "element face " << mesh.triangles().size() << "\n"
        << "property list uchar int vertex_indices\nend_header\n";
    if (binary) {
        for (const Vec3& v : mesh.vertices()) {
            const double xyz[3] = {v.x(), v.y(), v.z()};
            out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
        }
        for (const Triangle& t : mesh.triangles()) {
            const std::uint8_t n = 3;
            out.write(reinterpret_cast<const char*>(&n), 1);
            const std::int32_t idx[3] = {static_cast<std::int32_t>(t[0]), static_cast<std::int32_t>(t[1]),
                                         static_cast<std::int32_t>(t[2])};
            out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
        }
    } else {
        out.precision(17);
        for (const Vec3& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        for (const Triangle& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
}

} // namespace see
