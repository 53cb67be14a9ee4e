#include "see/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace see {
namespace {

constexpr std::uint32_t kLeafSize = 8;

bool ray_hits_box(const Aabb& box, const Vec3& o, const Vec3& inv, const Vec3& d, double t_min, double t_max,
                  double& entry) {
    double lo = t_min;
    double hi = t_max;
    for (int a = 0; a < 3; ++a) {
        if (d[a] == 0.0) {
            if (o[a] < box.min[a] || o[a] > box.max[a]) return false;
            continue;
        }
        double t0 = (box.min[a] - o[a]) * inv[a];
        double t1 = (box.max[a] - o[a]) * inv[a];
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        if (lo > hi) return false;
    }
    entry = lo;
    return true;
}

Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;
    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + d1 / (d1 - d3) * ab;
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + d2 / (d2 - d6) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

} // namespace

simd::TrianglesView TriangleMesh::Soa::view(std::size_t first, std::size_t count) const {
    return {v0x.data() + first, v0y.data() + first, v0z.data() + first, e1x.data() + first, e1y.data() + first,
            e1z.data() + first, e2x.data() + first, e2y.data() + first, e2z.data() + first, count};
}

void TriangleMesh::Soa::push(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    v0x.push_back(a.x()); v0y.push_back(a.y()); v0z.push_back(a.z());
    e1x.push_back(e1.x()); e1y.push_back(e1.y()); e1z.push_back(e1.z());
    e2x.push_back(e2.x()); e2y.push_back(e2.y()); e2z.push_back(e2.z());
}

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    for (const Vec3& v : vertices_) {
        if (!is_finite(v)) throw InputError("mesh: non-finite vertex");
        bounds_.extend(v);
    }
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
        for (std::uint32_t idx : triangles_[i]) {
            if (idx >= vertices_.size()) {
                throw InputError("mesh: triangle " + std::to_string(i) + " references missing vertex " +
                                 std::to_string(idx));
            }
        }
    }
    if (triangles_.empty()) throw InputError("mesh: no triangles");

    std::vector<Vec3> centroids;
    centroids.reserve(triangles_.size());
    for (const Triangle& t : triangles_) {
        const Vec3& a = vertices_[t[0]];
        const Vec3& b = vertices_[t[1]];
        const Vec3& c = vertices_[t[2]];
        mesh_tris_.push(a, b, c);
        centroids.push_back((a + b + c) / 3.0);
    }

    std::vector<std::uint32_t> order(triangles_.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    nodes_.reserve(2 * triangles_.size() / kLeafSize + 2);
    build(order, 0, static_cast<std::uint32_t>(order.size()), centroids);

    leaf_to_mesh_ = order;
    for (std::uint32_t idx : order) {
        const Triangle& t = triangles_[idx];
        leaf_tris_.push(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    }
}

std::uint32_t TriangleMesh::build(std::vector<std::uint32_t>& order, std::uint32_t first, std::uint32_t count,
                                  const std::vector<Vec3>& centroids) {
    const auto node_index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();

    Aabb box;
    Aabb centroid_box;
    for (std::uint32_t i = first; i < first + count; ++i) {
        for (std::uint32_t v : triangles_[order[i]]) box.extend(vertices_[v]);
        centroid_box.extend(centroids[order[i]]);
    }
    // Slight padding keeps rays grazing a face from being culled by rounding in the slab test.
    box = box.expanded(1e-9 * std::max(1.0, box.diagonal()));
    nodes_[node_index].box = box;

    const Vec3 extent = centroid_box.max - centroid_box.min;
    int axis = 0;
    if (extent.y() > extent[axis]) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;

    const auto begin = order.begin() + first;
    const auto end = begin + count;
    if (count <= kLeafSize || extent[axis] <= 0.0) {
        // Mesh order inside a leaf so the kernel's lowest-index tie rule is the mesh's.
        std::sort(begin, end);
        nodes_[node_index].first = first;
        nodes_[node_index].count = count;
        return node_index;
    }

    const std::uint32_t half = count / 2;
    std::nth_element(begin, begin + half, end, [&](std::uint32_t a, std::uint32_t b) {
        const double ca = centroids[a][axis];
        const double cb = centroids[b][axis];
        return ca < cb || (ca == cb && a < b);
    });
    const std::uint32_t left = build(order, first, half, centroids);
    const std::uint32_t right = build(order, first + half, count - half, centroids);
    nodes_[node_index].first = left;
    nodes_[node_index].right = right;
    nodes_[node_index].count = 0;
    return node_index;
}

std::optional<RayHit> TriangleMesh::raycast(const Vec3& origin, const Vec3& direction, double t_min,
                                            double t_max) const {
    const simd::KernelTable& kernels = simd::active();
    const simd::Ray ray{origin.x(), origin.y(), origin.z(), direction.x(), direction.y(), direction.z()};
    const Vec3 inv = direction.cwiseInverse();

    double best_t = std::numeric_limits<double>::infinity();
    std::int64_t best_tri = -1;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        double entry;
        if (!ray_hits_box(node.box, origin, inv, direction, t_min, std::min(t_max, best_t), entry)) continue;
        if (node.count > 0) {
            const simd::BlockHit hit = kernels.ray_block(leaf_tris_.view(node.first, node.count), ray, t_min, t_max);
            if (hit.index < 0) continue;
            const std::uint32_t tri = leaf_to_mesh_[node.first + static_cast<std::uint32_t>(hit.index)];
            if (hit.t < best_t || (hit.t == best_t && static_cast<std::int64_t>(tri) < best_tri)) {
                best_t = hit.t;
                best_tri = tri;
            }
            continue;
        }
        // Push the far child first so the near one is visited next.
        const Node& l = nodes_[node.first];
        const Node& r = nodes_[node.right];
        const double dl = (l.box.center() - origin).dot(direction);
        const double dr = (r.box.center() - origin).dot(direction);
        if (dl <= dr) {
            stack[top++] = node.right;
            stack[top++] = node.first;
        } else {
            stack[top++] = node.first;
            stack[top++] = node.right;
        }
    }
    if (best_tri < 0) return std::nullopt;
    return RayHit{best_t, static_cast<std::uint32_t>(best_tri)};
}

std::optional<RayHit> TriangleMesh::raycast_brute_force(const Vec3& origin, const Vec3& direction, double t_min,
                                                        double t_max) const {
    const simd::Ray ray{origin.x(), origin.y(), origin.z(), direction.x(), direction.y(), direction.z()};
    const simd::BlockHit hit = simd::active().ray_block(mesh_tris_.view(0, triangles_.size()), ray, t_min, t_max);
    if (hit.index < 0) return std::nullopt;
    return RayHit{hit.t, static_cast<std::uint32_t>(hit.index)};
}

bool TriangleMesh::segment_blocked(const Vec3& from, const Vec3& to) const {
    return raycast(from, to - from, 0.0, 1.0).has_value();
}

double TriangleMesh::surface_area() const {
    double area = 0.0;
    for (const Triangle& t : triangles_) {
        area += 0.5 * (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]).norm();
    }
    return area;
}

double TriangleMesh::distance_to_surface(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Triangle& t : triangles_) {
        const Vec3 q = closest_on_triangle(p, vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
        best = std::min(best, (q - p).norm());
    }
    return best;
}

namespace shapes {
namespace {

// Grid of (n+1)^2 vertices at origin + i/n * u + j/n * v, two triangles per cell.
void add_grid(std::vector<Vec3>& vertices, std::vector<Triangle>& triangles, const Vec3& origin, const Vec3& u,
              const Vec3& v, int n) {
    const auto base = static_cast<std::uint32_t>(vertices.size());
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            vertices.push_back(origin + (static_cast<double>(i) / n) * u + (static_cast<double>(j) / n) * v);
        }
    }
    const auto at = [&](int i, int j) { return base + static_cast<std::uint32_t>(j * (n + 1) + i); };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    }
}

void check_subdivisions(int n) {
    if (n < 1) throw InputError("shape subdivisions must be at least 1");
}

} // namespace

TriangleMesh plate(double size, int subdivisions) {
    check_subdivisions(subdivisions);
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    const double h = size / 2.0;
    add_grid(vertices, triangles, Vec3(-h, -h, 0.0), Vec3(size, 0, 0), Vec3(0, size, 0), subdivisions);
    return TriangleMesh(std::move(vertices), std::move(triangles));
}

TriangleMesh cube(double size, int subdivisions) {
    check_subdivisions(subdivisions);
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    const double h = size / 2.0;
    const Vec3 x(size, 0, 0), y(0, size, 0), z(0, 0, size);
    // Each face wound counter-clockwise seen from outside.
    add_grid(vertices, triangles, Vec3(-h, -h, -h), y, x, subdivisions);  // z = -h
    add_grid(vertices, triangles, Vec3(-h, -h, h), x, y, subdivisions);   // z = +h
    add_grid(vertices, triangles, Vec3(-h, -h, -h), x, z, subdivisions);  // y = -h
    add_grid(vertices, triangles, Vec3(-h, h, -h), z, x, subdivisions);   // y = +h
    add_grid(vertices, triangles, Vec3(-h, -h, -h), z, y, subdivisions);  // x = -h
    add_grid(vertices, triangles, Vec3(h, -h, -h), y, z, subdivisions);   // x = +h
    return TriangleMesh(std::move(vertices), std::move(triangles));
}

TriangleMesh sphere(double radius, int subdivisions) {
    if (subdivisions < 0) throw InputError("sphere subdivisions must be non-negative");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> vertices = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : vertices) v.normalize();
    std::vector<Triangle> triangles = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
        {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
        const auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            const auto it = midpoints.find(key);
            if (it != midpoints.end()) return it->second;
            vertices.push_back((vertices[a] + vertices[b]).normalized());
            const auto idx = static_cast<std::uint32_t>(vertices.size() - 1);
            midpoints.emplace(key, idx);
            return idx;
        };
        std::vector<Triangle> next;
        next.reserve(triangles.size() * 4);
        for (const Triangle& tri : triangles) {
            const std::uint32_t ab = midpoint(tri[0], tri[1]);
            const std::uint32_t bc = midpoint(tri[1], tri[2]);
            const std::uint32_t ca = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        triangles = std::move(next);
    }
    for (Vec3& v : vertices) v *= radius;
    return TriangleMesh(std::move(vertices), std::move(triangles));
}

TriangleMesh right_angle(double size, int subdivisions) {
    check_subdivisions(subdivisions);
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    const double h = size / 2.0;
    add_grid(vertices, triangles, Vec3(-h, 0, 0), Vec3(size, 0, 0), Vec3(0, size, 0), subdivisions);
    add_grid(vertices, triangles, Vec3(-h, 0, 0), Vec3(0, 0, size), Vec3(size, 0, 0), subdivisions);
    return TriangleMesh(std::move(vertices), std::move(triangles));
}

} // namespace shapes
} // namespace see
