#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "robinlab/errors.hpp"
#include "robinlab/geometry.hpp"

namespace robinlab {

/// Conforming triangulation of a convex polygon. Built as a fan from the
/// incenter over a pre-split boundary, then uniformly midpoint-refined;
/// refinement preserves triangle similarity classes, so mesh quality is
/// fixed by the fan.
struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> boundary_segments;
    int level = 0;

    int node_count() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

constexpr int kMeshNodeCap = 2'000'000;

inline std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

} // namespace detail

inline double max_edge_length(const TriangleMesh& mesh) {
    double m = 0.0;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            m = std::max(m, norm(mesh.nodes[static_cast<size_t>(t[static_cast<size_t>(e)])] -
                                 mesh.nodes[static_cast<size_t>(t[static_cast<size_t>((e + 1) % 3)])]));
    return m;
}

/// Aspect ratio measured as longest/shortest edge per triangle.
inline double max_aspect_ratio(const TriangleMesh& mesh) {
    double worst = 0.0;
    for (const auto& t : mesh.triangles) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int e = 0; e < 3; ++e) {
            const double len =
                norm(mesh.nodes[static_cast<size_t>(t[static_cast<size_t>(e)])] -
                     mesh.nodes[static_cast<size_t>(t[static_cast<size_t>((e + 1) % 3)])]);
            lo = std::min(lo, len);
            hi = std::max(hi, len);
        }
        worst = std::max(worst, hi / lo);
    }
    return worst;
}

inline double triangle_area(const TriangleMesh& mesh, const std::array<int, 3>& t) {
    const Vec2 a = mesh.nodes[static_cast<size_t>(t[0])];
    const Vec2 b = mesh.nodes[static_cast<size_t>(t[1])];
    const Vec2 c = mesh.nodes[static_cast<size_t>(t[2])];
    return 0.5 * cross(b - a, c - a);
}

inline double total_area(const TriangleMesh& mesh) {
    double s = 0.0;
    for (const auto& t : mesh.triangles) s += triangle_area(mesh, t);
    return s;
}

/// Number of distinct undirected edges (for the Euler check V - E + F = 1).
inline std::int64_t edge_count(const TriangleMesh& mesh) {
    std::unordered_map<std::uint64_t, int> seen;
    seen.reserve(mesh.triangles.size() * 2);
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            seen[detail::edge_key(t[static_cast<size_t>(e)], t[static_cast<size_t>((e + 1) % 3)])]++;
    return static_cast<std::int64_t>(seen.size());
}

/// True when every edge is shared by exactly two triangles, except the
/// declared boundary segments which belong to exactly one.
inline bool is_edge_manifold(const TriangleMesh& mesh) {
    std::unordered_map<std::uint64_t, int> incidence;
    incidence.reserve(mesh.triangles.size() * 2);
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            incidence[detail::edge_key(t[static_cast<size_t>(e)],
                                       t[static_cast<size_t>((e + 1) % 3)])]++;
    std::unordered_map<std::uint64_t, int> boundary;
    for (const auto& s : mesh.boundary_segments) boundary[detail::edge_key(s[0], s[1])]++;
    if (boundary.size() != mesh.boundary_segments.size()) return false; // duplicates
    for (const auto& [key, cnt] : boundary) {
        (void)cnt;
        auto it = incidence.find(key);
        if (it == incidence.end() || it->second != 1) return false;
    }
    for (const auto& [key, cnt] : incidence) {
        if (cnt == 2 && boundary.count(key) == 0) continue;
        if (cnt == 1 && boundary.count(key) == 1) continue;
        return false;
    }
    return true;
}

/// Uniform 4-way refinement by edge-midpoint subdivision. Boundary segment
/// midpoints stay on the straight polygon edges by construction.
inline TriangleMesh refine(const TriangleMesh& mesh) {
    const std::int64_t projected =
        static_cast<std::int64_t>(mesh.nodes.size()) + edge_count(mesh);
    if (projected > detail::kMeshNodeCap)
        throw MeshTooFine("refinement would exceed the node cap");

    TriangleMesh out;
    out.nodes = mesh.nodes;
    out.level = mesh.level + 1;
    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(mesh.triangles.size() * 2);
    auto mid = [&](int a, int b) {
        const auto key = detail::edge_key(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(out.nodes.size());
        out.nodes.push_back(0.5 * (mesh.nodes[static_cast<size_t>(a)] +
                                   mesh.nodes[static_cast<size_t>(b)]));
        midpoint.emplace(key, idx);
        return idx;
    };

    out.triangles.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    out.boundary_segments.reserve(mesh.boundary_segments.size() * 2);
    for (const auto& s : mesh.boundary_segments) {
        const int m = mid(s[0], s[1]);
        out.boundary_segments.push_back({s[0], m});
        out.boundary_segments.push_back({m, s[1]});
    }
    return out;
}

/// Fan triangulation from the incenter over a boundary pre-split to
/// target_h, then uniform refinement until the longest edge (the fan
/// spokes) also reaches target_h.
inline TriangleMesh triangulate(const ConvexPolygon& poly, double target_h) {
    if (!(target_h > 0.0)) throw BadParameter("target_h must be positive");
    const Vec2 center = detail::chebyshev_center(poly).center;

    TriangleMesh mesh;
    mesh.nodes.push_back(center);
    for (int i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly.vertex(i);
        const Vec2 b = poly.vertex(i + 1);
        const int nseg = std::max(1, static_cast<int>(std::ceil(norm(b - a) / target_h)));
        for (int j = 0; j < nseg; ++j)
            mesh.nodes.push_back(a + (static_cast<double>(j) / nseg) * (b - a));
        if (mesh.node_count() > detail::kMeshNodeCap)
            throw MeshTooFine("boundary pre-split exceeds the node cap");
    }
    const int ring = mesh.node_count() - 1;
    for (int i = 0; i < ring; ++i) {
        const int a = 1 + i;
        const int b = 1 + (i + 1) % ring;
        mesh.triangles.push_back({0, a, b});
        mesh.boundary_segments.push_back({a, b});
    }
    while (max_edge_length(mesh) > target_h) {
        mesh = refine(mesh);
        mesh.level = 0; // internal sizing refinements do not count as levels
    }
    return mesh;
}

} // namespace robinlab
