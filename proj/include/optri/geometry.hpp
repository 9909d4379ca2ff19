// Planar primitives: triangles and their metrics, lattice tilings generated by
// a triangle and its point-reflected copy, clipping against axis-aligned cells,
// convex polygon fan triangulation, and conformity validation of triangulations.
//
// Conventions: the merge tolerance for points is 1e-12 (the domain is unit
// scale), clipping classifies on-edge points inside an epsilon band of 1e-12,
// and clipped polygons with area below 1e-14 are discarded as slivers.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "optri/errors.hpp"

namespace optri {

inline constexpr double kMergeTol = 1e-12;
inline constexpr double kOnEdgeTol = 1e-12;
inline constexpr double kSliverArea = 1e-14;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

inline bool near(Point2 a, Point2 b, double tol = kMergeTol) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool contains(Point2 p, double tol = 0.0) const {
        return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
    }
    bool on_boundary(Point2 p, double tol = kOnEdgeTol) const {
        if (!contains(p, tol)) return false;
        return std::abs(p.x - x0) <= tol || std::abs(p.x - x1) <= tol ||
               std::abs(p.y - y0) <= tol || std::abs(p.y - y1) <= tol;
    }
};

struct Triangle {
    Point2 a, b, c;

    double signed_area() const { return 0.5 * cross(b - a, c - a); }
    double area() const { return std::abs(signed_area()); }
    Point2 centroid() const { return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0}; }
    Point2 vertex(int i) const { return i == 0 ? a : (i == 1 ? b : c); }

    bool contains(Point2 p, double tol = kOnEdgeTol) const {
        double s = signed_area() >= 0 ? 1.0 : -1.0;
        double scale = std::max({dist(a, b), dist(b, c), dist(c, a)});
        return s * cross(b - a, p - a) >= -tol * scale &&
               s * cross(c - b, p - b) >= -tol * scale &&
               s * cross(a - c, p - c) >= -tol * scale;
    }
};

struct TriangleMetrics {
    double area = 0.0;
    double diameter = 0.0;    // length of the longest side
    double min_height = 0.0;  // 2*area / diameter
    Point2 circumcenter;
    double circumradius = 0.0;
};

inline TriangleMetrics triangle_metrics(const Triangle& t) {
    double area = t.area();
    if (area < kSliverArea)
        throw DegenerateTriangle("triangle area " + std::to_string(area) + " below tolerance");
    double ab = dist(t.a, t.b), bc = dist(t.b, t.c), ca = dist(t.c, t.a);
    double diam = std::max({ab, bc, ca});

    Point2 u = t.b - t.a, v = t.c - t.a;
    double d = 2.0 * cross(u, v);
    double nu = dot(u, u), nv = dot(v, v);
    Point2 m{t.a.x + (v.y * nu - u.y * nv) / d, t.a.y + (u.x * nv - v.x * nu) / d};

    TriangleMetrics out;
    out.area = area;
    out.diameter = diam;
    out.min_height = 2.0 * area / diam;
    out.circumcenter = m;
    out.circumradius = dist(m, t.a);
    return out;
}

// Equilateral triangle of a given area with circumcenter at `center`; vertex k
// sits at angle orientation + 2*pi*k/3 on the circumscribed circle.
inline Triangle make_equilateral(Point2 center, double area, double orientation = 0.0) {
    if (!(area > 0.0)) throw InvalidArgument("make_equilateral: area must be positive");
    double side = 2.0 * std::sqrt(area) / std::pow(3.0, 0.25);
    double r = side / std::sqrt(3.0);
    Triangle t;
    for (int k = 0; k < 3; ++k) {
        double ang = orientation + 2.0 * M_PI * k / 3.0;
        Point2 v{center.x + r * std::cos(ang), center.y + r * std::sin(ang)};
        (k == 0 ? t.a : (k == 1 ? t.b : t.c)) = v;
    }
    return t;
}

namespace detail {

// Separating-axis overlap test between a triangle and a rectangle (closed sets).
inline bool triangle_touches_rect(const Triangle& t, const Rect& r, double tol = kOnEdgeTol) {
    double tminx = std::min({t.a.x, t.b.x, t.c.x}), tmaxx = std::max({t.a.x, t.b.x, t.c.x});
    double tminy = std::min({t.a.y, t.b.y, t.c.y}), tmaxy = std::max({t.a.y, t.b.y, t.c.y});
    if (tmaxx < r.x0 - tol || tminx > r.x1 + tol || tmaxy < r.y0 - tol || tminy > r.y1 + tol)
        return false;
    const Point2 tv[3] = {t.a, t.b, t.c};
    const Point2 rv[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    for (int e = 0; e < 3; ++e) {
        Point2 d = tv[(e + 1) % 3] - tv[e];
        Point2 n{-d.y, d.x};
        double t0 = std::numeric_limits<double>::max(), t1 = -t0, r0 = t0, r1 = -t0;
        for (const Point2& p : tv) { double s = dot(n, p); t0 = std::min(t0, s); t1 = std::max(t1, s); }
        for (const Point2& p : rv) { double s = dot(n, p); r0 = std::min(r0, s); r1 = std::max(r1, s); }
        double scale = norm(d);
        if (t1 < r0 - tol * scale || r1 < t0 - tol * scale) return false;
    }
    return true;
}

}  // namespace detail

// All translates of T and of its point-reflected copy (through the midpoint of
// edge ab) along the lattice spanned by the parallelogram edge vectors b-a and
// c-a, keeping those whose closure intersects the cell. Output is canonically
// sorted by centroid.
inline std::vector<Triangle> tile_region(const Triangle& t, const Rect& cell) {
    if (t.area() < kSliverArea) throw DegenerateTriangle("tile_region: degenerate tile");
    Point2 e1 = t.b - t.a;
    Point2 e2 = t.c - t.a;
    double det = cross(e1, e2);

    // Lattice coordinates of the cell corners, expanded by the tile's extent.
    double imin = std::numeric_limits<double>::max(), imax = -imin;
    double jmin = imin, jmax = -imin;
    const Point2 corners[4] = {{cell.x0, cell.y0}, {cell.x1, cell.y0}, {cell.x1, cell.y1}, {cell.x0, cell.y1}};
    for (const Point2& q : corners) {
        Point2 d = q - t.a;
        double i = cross(d, e2) / det;
        double j = cross(e1, d) / det;
        imin = std::min(imin, i); imax = std::max(imax, i);
        jmin = std::min(jmin, j); jmax = std::max(jmax, j);
    }
    int ilo = static_cast<int>(std::floor(imin)) - 2, ihi = static_cast<int>(std::ceil(imax)) + 2;
    int jlo = static_cast<int>(std::floor(jmin)) - 2, jhi = static_cast<int>(std::ceil(jmax)) + 2;

    // Point reflection of T through the midpoint of edge ab: p -> a + b - p.
    Point2 ref = t.a + t.b;
    Triangle flipped{ref - t.a, ref - t.b, ref - t.c};

    std::vector<Triangle> out;
    for (int i = ilo; i <= ihi; ++i) {
        for (int j = jlo; j <= jhi; ++j) {
            Point2 shift{i * e1.x + j * e2.x, i * e1.y + j * e2.y};
            for (const Triangle& base : {t, flipped}) {
                Triangle cand{base.a + shift, base.b + shift, base.c + shift};
                if (detail::triangle_touches_rect(cand, cell)) out.push_back(cand);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Triangle& p, const Triangle& q) {
        Point2 cp = p.centroid(), cq = q.centroid();
        if (cp.x != cq.x) return cp.x < cq.x;
        return cp.y < cq.y;
    });
    return out;
}

// Convex polygon as an ordered (positively oriented) vertex loop.
struct Polygon {
    std::vector<Point2> vertices;

    double area() const {
        double s = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            const Point2& p = vertices[i];
            const Point2& q = vertices[(i + 1) % vertices.size()];
            s += cross(p, q);
        }
        return 0.5 * s;
    }
};

namespace detail {

// Clip a convex polygon against the half-plane keep-side of one cell edge.
// `axis` 0 = vertical line x = c, 1 = horizontal line y = c; `keep_below`
// keeps coordinates <= c. Crossing points get the line coordinate exactly.
inline std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, int axis, double c,
                                           bool keep_below) {
    std::vector<Point2> out;
    out.reserve(poly.size() + 1);
    auto coord = [axis](Point2 p) { return axis == 0 ? p.x : p.y; };
    auto side = [&](Point2 p) {
        double d = keep_below ? c - coord(p) : coord(p) - c;
        if (d > kOnEdgeTol) return 1;    // strictly inside
        if (d < -kOnEdgeTol) return -1;  // strictly outside
        return 0;                        // on the edge band
    };
    auto cut = [&](Point2 p, Point2 q) {
        double t = (c - coord(p)) / (coord(q) - coord(p));
        Point2 r{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
        if (axis == 0) r.x = c; else r.y = c;
        return r;
    };
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point2 p = poly[i], q = poly[(i + 1) % n];
        int sp = side(p), sq = side(q);
        if (sp >= 0) out.push_back(sp == 0 ? [&] { Point2 r = p; (axis == 0 ? r.x : r.y) = c; return r; }() : p);
        if (sp * sq < 0) out.push_back(cut(p, q));
    }
    // Merge consecutive duplicates.
    std::vector<Point2> dedup;
    for (const Point2& p : out) {
        if (dedup.empty() || !near(dedup.back(), p)) dedup.push_back(p);
    }
    while (dedup.size() > 1 && near(dedup.front(), dedup.back())) dedup.pop_back();
    return dedup;
}

inline std::vector<Point2> clip_to_rect(const Triangle& t, const Rect& cell) {
    std::vector<Point2> poly;
    if (t.signed_area() >= 0)
        poly = {t.a, t.b, t.c};
    else
        poly = {t.a, t.c, t.b};
    poly = clip_half_plane(poly, 0, cell.x0, false);
    if (poly.size() >= 3) poly = clip_half_plane(poly, 0, cell.x1, true);
    if (poly.size() >= 3) poly = clip_half_plane(poly, 1, cell.y0, false);
    if (poly.size() >= 3) poly = clip_half_plane(poly, 1, cell.y1, true);
    if (poly.size() < 3) poly.clear();
    return poly;
}

// Rotate the loop so the lexicographically smallest vertex comes first.
inline void canonical_rotation(std::vector<Point2>& loop) {
    auto it = std::min_element(loop.begin(), loop.end(), [](Point2 p, Point2 q) {
        if (p.x != q.x) return p.x < q.x;
        return p.y < q.y;
    });
    std::rotate(loop.begin(), it, loop.end());
}

}  // namespace detail

// Fan triangulation of a convex polygon anchored at the canonical (lex-smallest)
// vertex. Produces n-2 triangles and never introduces new vertices.
inline std::vector<Triangle> triangulate_polygon(const Polygon& poly) {
    std::vector<Point2> v = poly.vertices;
    if (v.size() < 3) throw InvalidArgument("triangulate_polygon: fewer than 3 vertices");
    if (poly.area() < 0) std::reverse(v.begin(), v.end());
    double scale = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) scale = std::max(scale, dist(v[i], v[(i + 1) % v.size()]));
    for (std::size_t i = 0; i < v.size(); ++i) {
        Point2 p = v[i], q = v[(i + 1) % v.size()], r = v[(i + 2) % v.size()];
        if (cross(q - p, r - q) < -kOnEdgeTol * scale * scale)
            throw InvalidArgument("triangulate_polygon: polygon is not convex");
    }
    detail::canonical_rotation(v);
    std::vector<Triangle> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        Triangle t{v[0], v[i], v[i + 1]};
        if (t.area() >= kSliverArea) out.push_back(t);
    }
    return out;
}

struct ClipResult {
    std::vector<Triangle> interior;        // tiles fully inside the cell
    std::vector<Triangle> boundary;        // triangles from clipped boundary tiles
    std::vector<Point2> boundary_vertices; // produced vertices on the cell boundary
};

// Clip a covering tile set to a cell. Tiles fully inside pass through; tiles
// crossing the boundary are clipped to convex polygons (at most 7 vertices)
// and fan-triangulated without new vertices. Output triangles partition the cell.
inline ClipResult clip_to_cell(const std::vector<Triangle>& tiles, const Rect& cell) {
    ClipResult out;
    auto note_boundary_vertex = [&](Point2 p) {
        if (!cell.on_boundary(p)) return;
        for (const Point2& q : out.boundary_vertices)
            if (near(q, p)) return;
        out.boundary_vertices.push_back(p);
    };
    double covered = 0.0;
    for (const Triangle& t : tiles) {
        bool inside = cell.contains(t.a, kOnEdgeTol) && cell.contains(t.b, kOnEdgeTol) &&
                      cell.contains(t.c, kOnEdgeTol);
        if (inside) {
            out.interior.push_back(t);
            covered += t.area();
            for (int i = 0; i < 3; ++i) note_boundary_vertex(t.vertex(i));
            continue;
        }
        std::vector<Point2> poly = detail::clip_to_rect(t, cell);
        if (poly.size() < 3) continue;
        Polygon p{poly};
        if (std::abs(p.area()) < kSliverArea) continue;
        for (const Triangle& piece : triangulate_polygon(p)) {
            out.boundary.push_back(piece);
            covered += piece.area();
            for (int i = 0; i < 3; ++i) note_boundary_vertex(piece.vertex(i));
        }
    }
    if (covered < cell.area() * (1.0 - 1e-8))
        throw CoverageError("clip_to_cell: tiles cover " + std::to_string(covered) + " of cell area " +
                            std::to_string(cell.area()));
    return out;
}

// Indexed triangulation of an axis-aligned domain.
struct Triangulation {
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;
    Rect domain;

    Triangle triangle(std::size_t i) const {
        const auto& f = triangles[i];
        return {vertices[f[0]], vertices[f[1]], vertices[f[2]]};
    }
    std::size_t size() const { return triangles.size(); }
};

// Merges points within the 1e-12 tolerance while assigning indices.
class VertexMerger {
public:
    explicit VertexMerger(double tol = kMergeTol) : tol_(tol) {}

    int add(Point2 p, std::vector<Point2>& vertices) {
        std::int64_t cx = static_cast<std::int64_t>(std::floor(p.x / (4.0 * tol_)));
        std::int64_t cy = static_cast<std::int64_t>(std::floor(p.y / (4.0 * tol_)));
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (int idx : it->second)
                    if (near(vertices[idx], p, tol_)) return idx;
            }
        }
        int idx = static_cast<int>(vertices.size());
        vertices.push_back(p);
        cells_[key(cx, cy)].push_back(idx);
        return idx;
    }

private:
    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(y);
    }
    double tol_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

inline Triangulation make_triangulation(const std::vector<Triangle>& tris, const Rect& domain) {
    Triangulation out;
    out.domain = domain;
    VertexMerger merger;
    for (const Triangle& t : tris) {
        std::array<int, 3> f;
        for (int i = 0; i < 3; ++i) f[i] = merger.add(t.vertex(i), out.vertices);
        out.triangles.push_back(f);
    }
    return out;
}

struct ValidityReport {
    int overlapping_pairs = 0;       // pairs of triangles with interior overlap
    int hanging_vertices = 0;        // vertices strictly inside another triangle's edge
    int degenerate_triangles = 0;
    int duplicate_vertices = 0;
    int unreferenced_vertices = 0;
    double coverage_deficit = 0.0;   // domain area minus summed triangle area
    std::vector<std::pair<int, int>> overlap_samples;
    std::vector<int> hanging_samples;

    bool valid() const {
        return overlapping_pairs == 0 && hanging_vertices == 0 && degenerate_triangles == 0 &&
               duplicate_vertices == 0 && unreferenced_vertices == 0 &&
               std::abs(coverage_deficit) <= 1e-8;
    }
};

namespace detail {

// Uniform bucket grid over the domain for neighbor queries.
class BucketGrid {
public:
    BucketGrid(const Rect& domain, int n) : domain_(domain), n_(std::max(1, n)) {
        buckets_.resize(static_cast<std::size_t>(n_) * n_);
    }
    void insert(int id, double minx, double miny, double maxx, double maxy) {
        auto [i0, j0] = locate(minx, miny);
        auto [i1, j1] = locate(maxx, maxy);
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(i) * n_ + j].push_back(id);
    }
    template <class Fn>
    void for_candidates(double minx, double miny, double maxx, double maxy, Fn&& fn) const {
        auto [i0, j0] = locate(minx, miny);
        auto [i1, j1] = locate(maxx, maxy);
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                for (int id : buckets_[static_cast<std::size_t>(i) * n_ + j]) fn(id);
    }

private:
    std::pair<int, int> locate(double x, double y) const {
        double fx = (x - domain_.x0) / std::max(domain_.width(), 1e-300);
        double fy = (y - domain_.y0) / std::max(domain_.height(), 1e-300);
        int i = std::clamp(static_cast<int>(fx * n_), 0, n_ - 1);
        int j = std::clamp(static_cast<int>(fy * n_), 0, n_ - 1);
        return {i, j};
    }
    Rect domain_;
    int n_;
    std::vector<std::vector<int>> buckets_;
};

// Area of the intersection of two triangles (convex clip).
inline double overlap_area(const Triangle& s, const Triangle& t) {
    std::vector<Point2> poly;
    if (s.signed_area() >= 0)
        poly = {s.a, s.b, s.c};
    else
        poly = {s.a, s.c, s.b};
    Point2 tv[3] = {t.a, t.b, t.c};
    if (t.signed_area() < 0) std::swap(tv[1], tv[2]);
    for (int e = 0; e < 3 && poly.size() >= 3; ++e) {
        Point2 p = tv[e], q = tv[(e + 1) % 3];
        Point2 dir = q - p;
        std::vector<Point2> next;
        std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            Point2 u = poly[i], v = poly[(i + 1) % n];
            double su = cross(dir, u - p), sv = cross(dir, v - p);
            if (su >= 0) next.push_back(u);
            if ((su > 0 && sv < 0) || (su < 0 && sv > 0)) {
                double w = su / (su - sv);
                next.push_back({u.x + w * (v.x - u.x), u.y + w * (v.y - u.y)});
            }
        }
        poly = std::move(next);
    }
    if (poly.size() < 3) return 0.0;
    return std::abs(Polygon{poly}.area());
}

}  // namespace detail

// Conformity report: any two triangles may meet only in nothing, a shared
// vertex, or a full shared edge; triangles must cover the domain.
inline ValidityReport validate_triangulation(const Triangulation& tri) {
    ValidityReport rep;
    const std::size_t n = tri.size();

    std::vector<char> referenced(tri.vertices.size(), 0);
    double total_area = 0.0;
    std::vector<Triangle> ts(n);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = tri.triangle(i);
        total_area += ts[i].area();
        if (ts[i].area() < kSliverArea) ++rep.degenerate_triangles;
        for (int k = 0; k < 3; ++k) referenced[tri.triangles[i][k]] = 1;
    }
    rep.coverage_deficit = tri.domain.area() - total_area;
    for (char r : referenced)
        if (!r) ++rep.unreferenced_vertices;

    {
        VertexMerger merger;
        std::vector<Point2> merged;
        for (const Point2& p : tri.vertices) {
            std::size_t before = merged.size();
            merger.add(p, merged);
            if (merged.size() == before) ++rep.duplicate_vertices;
        }
    }

    int grid_n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    detail::BucketGrid grid(tri.domain, grid_n);
    std::vector<std::array<double, 4>> boxes(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Triangle& t = ts[i];
        boxes[i] = {std::min({t.a.x, t.b.x, t.c.x}), std::min({t.a.y, t.b.y, t.c.y}),
                    std::max({t.a.x, t.b.x, t.c.x}), std::max({t.a.y, t.b.y, t.c.y})};
        grid.insert(static_cast<int>(i), boxes[i][0], boxes[i][1], boxes[i][2], boxes[i][3]);
    }

    // Pairwise interior overlaps.
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> cands;
        grid.for_candidates(boxes[i][0], boxes[i][1], boxes[i][2], boxes[i][3],
                            [&](int j) { if (j > static_cast<int>(i)) cands.push_back(j); });
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        for (int j : cands) {
            if (boxes[i][0] > boxes[j][2] + kMergeTol || boxes[j][0] > boxes[i][2] + kMergeTol ||
                boxes[i][1] > boxes[j][3] + kMergeTol || boxes[j][1] > boxes[i][3] + kMergeTol)
                continue;
            if (detail::overlap_area(ts[i], ts[j]) > 1e-12) {
                ++rep.overlapping_pairs;
                if (rep.overlap_samples.size() < 16) rep.overlap_samples.push_back({static_cast<int>(i), j});
            }
        }
    }

    // Hanging vertices: a mesh vertex strictly inside some triangle edge.
    for (int vi = 0; vi < static_cast<int>(tri.vertices.size()); ++vi) {
        if (!referenced[vi]) continue;
        Point2 v = tri.vertices[vi];
        bool hanging = false;
        std::vector<int> cands;
        grid.for_candidates(v.x - kMergeTol, v.y - kMergeTol, v.x + kMergeTol, v.y + kMergeTol,
                            [&](int j) { cands.push_back(j); });
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        for (int j : cands) {
            const auto& f = tri.triangles[j];
            if (f[0] == vi || f[1] == vi || f[2] == vi) continue;
            for (int e = 0; e < 3 && !hanging; ++e) {
                Point2 p = tri.vertices[f[e]], q = tri.vertices[f[(e + 1) % 3]];
                Point2 d = q - p;
                double len2 = dot(d, d);
                if (len2 == 0.0) continue;
                double t = dot(v - p, d) / len2;
                if (t <= 0.0 || t >= 1.0) continue;
                Point2 proj = p + t * d;
                if (dist(proj, v) > kMergeTol) continue;
                if (dist(v, p) > 10 * kMergeTol && dist(v, q) > 10 * kMergeTol) hanging = true;
            }
            if (hanging) break;
        }
        if (hanging) {
            ++rep.hanging_vertices;
            if (rep.hanging_samples.size() < 16) rep.hanging_samples.push_back(vi);
        }
    }
    return rep;
}

}  // namespace optri
