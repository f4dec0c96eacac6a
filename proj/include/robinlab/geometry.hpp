#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "robinlab/errors.hpp"

namespace robinlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Planar convex region given by its CCW vertex list. Instances are only
/// produced by validate_polygon (or operations that preserve its invariants):
/// strictly convex, collinear vertices removed, first vertex lexicographically
/// smallest.
struct ConvexPolygon {
    std::vector<Vec2> vertices;

    int size() const { return static_cast<int>(vertices.size()); }
    Vec2 vertex(int i) const { return vertices[static_cast<size_t>(i % size())]; }
};

struct ShapeMetrics {
    double area = 0.0;
    double perimeter = 0.0;
    double inradius = 0.0;
    Vec2 incenter;
    double diameter = 0.0;
    double min_width = 0.0;
    double remainder_R = 0.0; // P*r/|Omega| - 1
    double remainder_A = 0.0; // w / diam
    int dimension_n = 2;
};

namespace detail {

inline double bbox_scale(const std::vector<Vec2>& pts) {
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::max(xmax - xmin, ymax - ymin);
}

inline double signed_area(const std::vector<Vec2>& pts) {
    double s = 0.0;
    const size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        s += cross(a, b);
    }
    return 0.5 * s;
}

inline bool lex_less(Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

} // namespace detail

/// Canonicalizes a CCW or CW vertex ring into a strictly convex polygon.
/// Throws TooFewVertices, NotConvex or Degenerate.
inline ConvexPolygon validate_polygon(std::vector<Vec2> pts) {
    if (pts.size() < 3) throw TooFewVertices("need at least 3 points");
    for (const auto& p : pts) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw BadParameter("non-finite vertex coordinate");
    }

    const double scale = detail::bbox_scale(pts);
    if (scale <= 0.0) throw Degenerate("all points coincide");
    const double dup_tol = 1e-12 * scale;
    const double cross_tol = 1e-12 * scale * scale;

    // Drop consecutive (near-)duplicates, including the wrap-around pair.
    std::vector<Vec2> ring;
    for (const auto& p : pts) {
        if (ring.empty() || norm(p - ring.back()) > dup_tol) ring.push_back(p);
    }
    while (ring.size() >= 2 && norm(ring.front() - ring.back()) <= dup_tol) ring.pop_back();
    if (ring.size() < 3) throw TooFewVertices("fewer than 3 distinct points");

    // Mixed turn signs mean a reflex vertex or a self-intersecting ring.
    auto turn = [&ring](size_t i) {
        const size_t n = ring.size();
        return cross(ring[(i + 1) % n] - ring[i], ring[(i + 2) % n] - ring[(i + 1) % n]);
    };
    bool any_pos = false, any_neg = false;
    for (size_t i = 0; i < ring.size(); ++i) {
        const double c = turn(i);
        any_pos |= c > cross_tol;
        any_neg |= c < -cross_tol;
    }
    if (any_pos && any_neg) throw NotConvex("vertex ring has both left and right turns");
    if (!any_pos && !any_neg) throw Degenerate("all points collinear");
    if (any_neg) std::reverse(ring.begin(), ring.end()); // clockwise input

    // Remove collinear vertices until every turn is strictly positive.
    bool removed = true;
    while (removed && ring.size() >= 3) {
        removed = false;
        for (size_t i = 0; i < ring.size();) {
            const size_t n = ring.size();
            const Vec2 prev = ring[(i + n - 1) % n];
            const Vec2 cur = ring[i];
            const Vec2 next = ring[(i + 1) % n];
            if (cross(cur - prev, next - cur) <= cross_tol) {
                ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
                removed = true;
            } else {
                ++i;
            }
        }
    }
    if (ring.size() < 3) throw Degenerate("collinear removal left fewer than 3 vertices");
    if (detail::signed_area(ring) < 1e-14 * scale * scale)
        throw Degenerate("area below 1e-14 of bounding-box scale");

    // Canonical rotation: lexicographically smallest vertex first.
    auto first = std::min_element(ring.begin(), ring.end(), detail::lex_less);
    std::rotate(ring.begin(), first, ring.end());
    return ConvexPolygon{std::move(ring)};
}

inline double area(const ConvexPolygon& poly) { return detail::signed_area(poly.vertices); }

inline double perimeter(const ConvexPolygon& poly) {
    double p = 0.0;
    for (int i = 0; i < poly.size(); ++i) p += norm(poly.vertex(i + 1) - poly.vertex(i));
    return p;
}

/// Inward unit normal of edge i (the edge from vertex i to vertex i+1).
inline Vec2 inward_normal(const ConvexPolygon& poly, int i) {
    const Vec2 t = poly.vertex(i + 1) - poly.vertex(i);
    const double len = norm(t);
    return {-t.y / len, t.x / len};
}

/// Distance of a point to the boundary, valid for points inside the polygon:
/// the distance function of a convex polygon is the min of the facet affine
/// functions. Negative outside.
inline double boundary_distance(const ConvexPolygon& poly, Vec2 p) {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < poly.size(); ++i)
        d = std::min(d, dot(inward_normal(poly, i), p - poly.vertex(i)));
    return d;
}

namespace detail {

struct ChebyshevResult {
    Vec2 center;
    double radius = 0.0;
};

/// Chebyshev center by enumerating all active-constraint edge triples.
/// Exact at desk scale; ties broken by lexicographically smallest center.
inline ChebyshevResult chebyshev_center(const ConvexPolygon& poly) {
    const int m = poly.size();
    std::vector<Vec2> nrm(static_cast<size_t>(m));
    std::vector<double> off(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        nrm[static_cast<size_t>(i)] = inward_normal(poly, i);
        off[static_cast<size_t>(i)] = dot(nrm[static_cast<size_t>(i)], poly.vertex(i));
    }
    const double scale = bbox_scale(poly.vertices);
    const double feas_tol = 1e-10 * scale;

    ChebyshevResult best;
    best.radius = -1.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int k = j + 1; k < m; ++k) {
                // Solve n_a . p - rho = off_a for the three active edges.
                const Vec2 ni = nrm[static_cast<size_t>(i)], nj = nrm[static_cast<size_t>(j)],
                           nk = nrm[static_cast<size_t>(k)];
                const double bi = off[static_cast<size_t>(i)], bj = off[static_cast<size_t>(j)],
                             bk = off[static_cast<size_t>(k)];
                const double det = ni.x * (nj.y * (-1.0) - (-1.0) * nk.y) -
                                   ni.y * (nj.x * (-1.0) - (-1.0) * nk.x) +
                                   (-1.0) * (nj.x * nk.y - nj.y * nk.x);
                if (std::abs(det) < 1e-14) continue;
                const double dx = bi * (nj.y * (-1.0) - (-1.0) * nk.y) -
                                  ni.y * (bj * (-1.0) - (-1.0) * bk) +
                                  (-1.0) * (bj * nk.y - nj.y * bk);
                const double dy = ni.x * (bj * (-1.0) - (-1.0) * bk) -
                                  bi * (nj.x * (-1.0) - (-1.0) * nk.x) +
                                  (-1.0) * (nj.x * bk - bj * nk.x);
                const double dr = ni.x * (nj.y * bk - bj * nk.y) -
                                  ni.y * (nj.x * bk - bj * nk.x) +
                                  bi * (nj.x * nk.y - nj.y * nk.x);
                const Vec2 p{dx / det, dy / det};
                const double rho = dr / det;
                if (rho <= 0.0) continue;
                bool feasible = true;
                for (int e = 0; e < m && feasible; ++e)
                    feasible = dot(nrm[static_cast<size_t>(e)], p) - off[static_cast<size_t>(e)] >=
                               rho - feas_tol;
                if (!feasible) continue;
                if (rho > best.radius + feas_tol ||
                    (std::abs(rho - best.radius) <= feas_tol && lex_less(p, best.center))) {
                    best.center = p;
                    best.radius = std::max(rho, best.radius);
                }
            }
    if (best.radius <= 0.0) throw Degenerate("no feasible Chebyshev center");
    return best;
}

} // namespace detail

/// Exact metrics of a convex polygon: area, perimeter, diameter, Chebyshev
/// inradius/incenter, minimal width, and the two remainder terms.
inline ShapeMetrics metrics(const ConvexPolygon& poly) {
    ShapeMetrics m;
    m.area = area(poly);
    m.perimeter = perimeter(poly);

    const auto cheb = detail::chebyshev_center(poly);
    m.inradius = cheb.radius;
    m.incenter = cheb.center;

    for (int i = 0; i < poly.size(); ++i)
        for (int j = i + 1; j < poly.size(); ++j)
            m.diameter = std::max(m.diameter, norm(poly.vertex(j) - poly.vertex(i)));

    // Minimal width of a convex polygon is attained perpendicular to an edge.
    m.min_width = std::numeric_limits<double>::infinity();
    for (int i = 0; i < poly.size(); ++i) {
        const Vec2 n = inward_normal(poly, i);
        double w = 0.0;
        for (int j = 0; j < poly.size(); ++j)
            w = std::max(w, dot(n, poly.vertex(j) - poly.vertex(i)));
        m.min_width = std::min(m.min_width, w);
    }

    m.remainder_R = m.perimeter * m.inradius / m.area - 1.0;
    m.remainder_A = m.min_width / m.diameter;
    return m;
}

/// Width omega(y) = h(y) + h(-y) of the polygon along a unit direction.
inline double support_width(const ConvexPolygon& poly, Vec2 direction) {
    if (std::abs(norm(direction) - 1.0) > 1e-12)
        throw NonUnitDirection("direction must have unit norm");
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& v : poly.vertices) {
        const double s = dot(v, direction);
        hi = std::max(hi, s);
        lo = std::min(lo, s);
    }
    return hi - lo;
}

namespace detail {

/// Clips a CCW vertex ring against the half-plane n.(x - a) >= t.
inline std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& ring, Vec2 n, double b) {
    std::vector<Vec2> out;
    const size_t m = ring.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec2 cur = ring[i];
        const Vec2 nxt = ring[(i + 1) % m];
        const double dc = dot(n, cur) - b;
        const double dn = dot(n, nxt) - b;
        if (dc >= 0.0) out.push_back(cur);
        if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
            const double s = dc / (dc - dn);
            out.push_back(cur + s * (nxt - cur));
        }
    }
    return out;
}

} // namespace detail

/// Inner parallel set at distance t: intersection of the edge half-planes
/// shifted inward by t. Empty once t reaches the inradius.
inline std::optional<ConvexPolygon> inner_parallel(const ConvexPolygon& poly, double t) {
    if (t < 0.0) throw NegativeOffset("offset must be nonnegative");
    if (t == 0.0) return poly;
    std::vector<Vec2> ring = poly.vertices;
    for (int i = 0; i < poly.size() && ring.size() >= 3; ++i) {
        const Vec2 n = inward_normal(poly, i);
        ring = detail::clip_half_plane(ring, n, dot(n, poly.vertex(i)) + t);
    }
    if (ring.size() < 3) return std::nullopt;
    if (detail::signed_area(ring) < 1e-14 * area(poly)) return std::nullopt;
    try {
        return validate_polygon(std::move(ring));
    } catch (const Error&) {
        return std::nullopt; // collapsed to a segment within tolerance
    }
}

namespace detail {

/// Deterministic uniform double in [0,1) from a 64-bit generator state.
inline double u01(std::uint64_t& state) {
    // splitmix64 step; portable and seed-stable across platforms.
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

} // namespace detail

/// Seeded random convex polygon: vertex_count points on the ellipse with
/// semi-axes (1, aspect). Same arguments always give the same polygon.
inline ConvexPolygon random_convex_polygon(std::uint64_t seed, int vertex_count, double aspect) {
    if (vertex_count < 3) throw BadParameter("vertex_count must be >= 3");
    if (!(aspect > 0.0 && aspect <= 1.0)) throw BadParameter("aspect must be in (0, 1]");
    // Scramble the seed before streaming: u01 advances its state by the
    // splitmix64 increment, so a linear seed map would make seed s after k
    // draws collide with seed s+k, letting nearby seeds emit shifted copies
    // of one stream (visible as duplicate "random" polygons).
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    std::uint64_t state = z ^ (z >> 31);
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<double> angles(static_cast<size_t>(vertex_count));
    const double min_gap = 0.05 * two_pi / vertex_count;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (auto& a : angles) a = two_pi * detail::u01(state);
        std::sort(angles.begin(), angles.end());
        bool ok = true;
        for (size_t i = 0; i + 1 < angles.size(); ++i) ok &= angles[i + 1] - angles[i] >= min_gap;
        ok &= two_pi - angles.back() + angles.front() >= min_gap;
        if (ok) break;
        if (attempt == 999) throw BadParameter("could not separate sampled angles");
    }
    std::vector<Vec2> pts;
    pts.reserve(angles.size());
    for (double a : angles) pts.push_back({std::cos(a), aspect * std::sin(a)});
    return validate_polygon(std::move(pts));
}

/// Axis-aligned a-by-b rectangle with its lower-left corner at the origin.
inline ConvexPolygon make_rectangle(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw BadParameter("rectangle sides must be positive");
    return validate_polygon({{0.0, 0.0}, {a, 0.0}, {a, b}, {0.0, b}});
}

/// Regular k-gon centered at the origin, scaled to the requested area.
inline ConvexPolygon make_regular_polygon(int k, double target_area) {
    if (k < 3) throw BadParameter("need at least 3 sides");
    if (!(target_area > 0.0)) throw BadParameter("area must be positive");
    const double two_pi = 2.0 * std::acos(-1.0);
    const double rho = std::sqrt(2.0 * target_area / (k * std::sin(two_pi / k)));
    std::vector<Vec2> pts;
    pts.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double a = two_pi * i / k;
        pts.push_back({rho * std::cos(a), rho * std::sin(a)});
    }
    return validate_polygon(std::move(pts));
}

} // namespace robinlab
