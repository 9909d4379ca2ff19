#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "optri/geometry.hpp"

using namespace optri;

TEST_CASE("metrics of the unit right isosceles triangle") {
    Triangle t{{0, 0}, {1, 0}, {0, 1}};
    TriangleMetrics m = triangle_metrics(t);
    CHECK(m.area == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(m.min_height == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(m.circumcenter.x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.circumcenter.y == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.circumradius == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("metrics of an equilateral triangle") {
    Triangle t{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}};
    TriangleMetrics m = triangle_metrics(t);
    CHECK(m.circumradius == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(m.min_height == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("metrics are invariant under rigid rotation") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Triangle t{{uni(rng), uni(rng)}, {uni(rng), uni(rng)}, {uni(rng), uni(rng)}};
        if (t.area() < 1e-3) continue;
        double ang = uni(rng) * 2.0 * M_PI;
        double c = std::cos(ang), s = std::sin(ang);
        auto rot = [&](Point2 p) { return Point2{c * p.x - s * p.y, s * p.x + c * p.y}; };
        Triangle r{rot(t.a), rot(t.b), rot(t.c)};
        TriangleMetrics m0 = triangle_metrics(t), m1 = triangle_metrics(r);
        CHECK(m1.area == doctest::Approx(m0.area).epsilon(1e-12));
        CHECK(m1.diameter == doctest::Approx(m0.diameter).epsilon(1e-12));
        CHECK(m1.min_height == doctest::Approx(m0.min_height).epsilon(1e-12));
        CHECK(m1.circumradius == doctest::Approx(m0.circumradius).epsilon(1e-12));
        // h * diam = 2 * area always, and the reported height is the smallest
        // of the three (heights are inversely ordered to their sides).
        CHECK(m0.min_height * m0.diameter == doctest::Approx(2.0 * m0.area).epsilon(1e-12));
        for (double side : {dist(t.a, t.b), dist(t.b, t.c), dist(t.c, t.a)})
            CHECK(2.0 * m0.area / side >= m0.min_height - 1e-12);
    }
}

TEST_CASE("degenerate triangles are rejected") {
    Triangle t{{0, 0}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(triangle_metrics(t), DegenerateTriangle);
}

TEST_CASE("make_equilateral: side, circumradius, symmetry, round trip") {
    Triangle t = make_equilateral({0, 0}, 1.0, 0.0);
    double side = 2.0 / std::pow(3.0, 0.25);
    CHECK(dist(t.a, t.b) == doctest::Approx(side).epsilon(1e-13));
    TriangleMetrics m = triangle_metrics(t);
    CHECK(m.area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.circumradius == doctest::Approx(side / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(norm(m.circumcenter) < 1e-12);

    // A third-turn rotation reproduces the same vertex set.
    Triangle r = make_equilateral({0, 0}, 1.0, 2.0 * M_PI / 3.0);
    for (int i = 0; i < 3; ++i) {
        bool found = false;
        for (int j = 0; j < 3; ++j) found = found || near(r.vertex(i), t.vertex(j), 1e-12);
        CHECK(found);
    }
    CHECK_THROWS_AS(make_equilateral({0, 0}, 0.0), InvalidArgument);
}

TEST_CASE("tile_region: aligned half-cell tile gives exactly two inside triangles") {
    Rect cell{0, 0, 1, 1};
    Triangle t{{0, 0}, {1, 0}, {1, 1}};  // parallelogram T u T~ is the cell itself
    std::vector<Triangle> tiles = tile_region(t, cell);
    int inside = 0;
    double total = 0.0;
    for (const Triangle& tile : tiles) {
        total += tile.area();
        if (cell.contains(tile.a, 1e-12) && cell.contains(tile.b, 1e-12) && cell.contains(tile.c, 1e-12))
            ++inside;
    }
    CHECK(inside == 2);
    CHECK(total >= cell.area() - 1e-12);
}

TEST_CASE("tile_region covers every cell point") {
    Rect cell{0, 0, 1, 1};
    Triangle t = make_equilateral({0.13, 0.07}, 0.037, 0.35);
    std::vector<Triangle> tiles = tile_region(t, cell);
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            Point2 p{i / 100.0, j / 100.0};
            bool covered = false;
            for (const Triangle& tile : tiles)
                if (tile.contains(p, 1e-9)) {
                    covered = true;
                    break;
                }
            CHECK(covered);
            if (!covered) return;
        }
    }
}

TEST_CASE("clip_to_cell: passthrough, clipping, partition") {
    Rect cell{0, 0, 1, 1};
    {
        Triangle crossing{{0.7, 0.5}, {1.3, 0.5}, {0.9, 0.9}};
        std::vector<Point2> poly = detail::clip_to_rect(crossing, cell);
        CHECK(poly.size() >= 3);
        CHECK(poly.size() <= 7);
        for (const Point2& p : poly) CHECK(cell.contains(p, 1e-12));
    }
    {
        Triangle t = make_equilateral({0.513, 0.281}, 0.041, 1.1);
        ClipResult clip = clip_to_cell(tile_region(t, cell), cell);
        double total = 0.0;
        for (const Triangle& tri : clip.interior) {
            total += tri.area();
            CHECK(cell.contains(tri.a, 1e-12));
            CHECK(cell.contains(tri.b, 1e-12));
            CHECK(cell.contains(tri.c, 1e-12));
        }
        for (const Triangle& tri : clip.boundary) total += tri.area();
        CHECK(total == doctest::Approx(cell.area()).epsilon(1e-10));
        for (const Point2& v : clip.boundary_vertices) CHECK(cell.on_boundary(v));
        CHECK(!clip.boundary_vertices.empty());
    }
    // Non-covering input.
    Triangle lone{{0.1, 0.1}, {0.2, 0.1}, {0.1, 0.2}};
    CHECK_THROWS_AS(clip_to_cell({lone}, cell), CoverageError);
}

TEST_CASE("triangulate_polygon basics") {
    Polygon tri{{{0, 0}, {1, 0}, {0, 1}}};
    auto out = triangulate_polygon(tri);
    REQUIRE(out.size() == 1);
    CHECK(out[0].area() == doctest::Approx(0.5));

    Polygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    auto sq = triangulate_polygon(square);
    REQUIRE(sq.size() == 2);
    CHECK(sq[0].area() + sq[1].area() == doctest::Approx(1.0).epsilon(1e-14));

    Polygon hex;
    for (int k = 0; k < 6; ++k)
        hex.vertices.push_back({std::cos(M_PI * k / 3.0), std::sin(M_PI * k / 3.0)});
    auto hx = triangulate_polygon(hex);
    REQUIRE(hx.size() == 4);
    double total = 0.0;
    for (const Triangle& t : hx) {
        total += t.area();
        for (int i = 0; i < 3; ++i) {
            bool is_input = false;
            for (const Point2& v : hex.vertices) is_input = is_input || near(v, t.vertex(i));
            CHECK(is_input);  // never introduces a new vertex
        }
    }
    CHECK(total == doctest::Approx(std::abs(hex.area())).epsilon(1e-12));

    Polygon dart{{{0, 0}, {2, 1}, {0, 2}, {1, 1}}};  // non-convex
    CHECK_THROWS_AS(triangulate_polygon(dart), InvalidArgument);
}

TEST_CASE("validate_triangulation accepts shared edges and flags violations") {
    Triangulation good;
    good.domain = {0, 0, 1, 1};
    good.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    good.triangles = {{0, 1, 2}, {0, 2, 3}};
    CHECK(validate_triangulation(good).valid());

    Triangulation overlapping = good;
    overlapping.triangles = {{0, 1, 2}, {0, 1, 3}};  // interiors overlap
    ValidityReport rep = validate_triangulation(overlapping);
    CHECK(rep.overlapping_pairs > 0);
    CHECK_FALSE(rep.valid());

    // Fan from an edge midpoint is conforming.
    Triangulation fan;
    fan.domain = {0, 0, 1, 1};
    fan.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0.5}};
    fan.triangles = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}};
    CHECK(validate_triangulation(fan).hanging_vertices == 0);

    // A vertex in the middle of another triangle's edge is not.
    Triangulation hung;
    hung.domain = {0, 0, 1, 1};
    hung.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    hung.triangles = {{0, 1, 2}, {0, 4, 3}, {4, 2, 3}};
    ValidityReport hung_rep = validate_triangulation(hung);
    CHECK(hung_rep.hanging_vertices > 0);
}

TEST_CASE("random tilings clip to exact partitions") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Rect cell{0, 0, 1, 1};
        Triangle t = make_equilateral({uni(rng), uni(rng)}, 0.01 + 0.1 * uni(rng), uni(rng) * M_PI);
        ClipResult clip = clip_to_cell(tile_region(t, cell), cell);
        double total = 0.0;
        std::vector<Triangle> all = clip.interior;
        all.insert(all.end(), clip.boundary.begin(), clip.boundary.end());
        for (const Triangle& tri : all) total += tri.area();
        CHECK(total == doctest::Approx(cell.area()).epsilon(1e-10));
        Triangulation mesh = make_triangulation(all, cell);
        ValidityReport rep = validate_triangulation(mesh);
        CHECK(rep.overlapping_pairs == 0);
        CHECK(rep.hanging_vertices == 0);
        CHECK(std::abs(rep.coverage_deficit) < 1e-8);
    }
}
