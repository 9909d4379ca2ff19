// Positive-definite quadratic forms q(x,y) = a x^2 + b y^2 + 2 c xy: eigen
// decomposition, the canonical affine map that turns q into u^2 + v^2, optimal
// triangles for q, and the per-triangle lower bound on the interpolation error.
#pragma once

#include <cmath>
#include <string>

#include "optri/constants.hpp"
#include "optri/errors.hpp"
#include "optri/geometry.hpp"

namespace optri {

struct QuadraticForm {
    double a = 1.0;  // coefficient of x^2
    double b = 1.0;  // coefficient of y^2
    double c = 0.0;  // half the coefficient of xy

    double operator()(double x, double y) const { return a * x * x + b * y * y + 2.0 * c * x * y; }
    double det() const { return a * b - c * c; }
    bool positive_definite() const { return det() > 0.0 && a > 0.0; }
};

struct EigenData {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Point2 axis;  // unit eigenvector of lambda_max; (-axis.y, axis.x) spans lambda_min
};

inline EigenData eigen_decompose(const QuadraticForm& q) {
    if (!q.positive_definite())
        throw NotPositiveDefinite("eigen_decompose: form is not positive definite");
    double mean = 0.5 * (q.a + q.b);
    double disc = std::sqrt(std::max(mean * mean - q.det(), 0.0));
    EigenData e;
    e.lambda_max = mean + disc;
    e.lambda_min = mean - disc;
    if (disc <= 1e-14 * mean) {
        e.axis = {1.0, 0.0};  // repeated eigenvalue: fix the axis for determinism
        return e;
    }
    // Rows of (Q - lambda_max I); pick the one with the larger norm.
    Point2 r0{q.a - e.lambda_max, q.c};
    Point2 r1{q.c, q.b - e.lambda_max};
    Point2 r = (dot(r0, r0) >= dot(r1, r1)) ? r0 : r1;
    Point2 v{-r.y, r.x};
    double n = norm(v);
    e.axis = {v.x / n, v.y / n};
    if (e.axis.x < 0.0 || (e.axis.x == 0.0 && e.axis.y < 0.0)) e.axis = {-e.axis.x, -e.axis.y};
    return e;
}

// Affine map p -> L p + shift with cached determinant of the linear part.
struct AffineMap {
    double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
    Point2 shift;

    Point2 operator()(Point2 p) const {
        return {m00 * p.x + m01 * p.y + shift.x, m10 * p.x + m11 * p.y + shift.y};
    }
    Triangle operator()(const Triangle& t) const { return {(*this)(t.a), (*this)(t.b), (*this)(t.c)}; }
    double det() const { return m00 * m11 - m01 * m10; }

    AffineMap inverse() const {
        double d = det();
        if (d == 0.0) throw InvalidArgument("AffineMap: singular map has no inverse");
        AffineMap inv;
        inv.m00 = m11 / d;
        inv.m01 = -m01 / d;
        inv.m10 = -m10 / d;
        inv.m11 = m00 / d;
        inv.shift = {-(inv.m00 * shift.x + inv.m01 * shift.y), -(inv.m10 * shift.x + inv.m11 * shift.y)};
        return inv;
    }

    static AffineMap rotation(double angle) {
        double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c, {0.0, 0.0}};
    }
    static AffineMap scaling(double sx, double sy) { return {sx, 0.0, 0.0, sy, {0.0, 0.0}}; }
    static AffineMap translation(Point2 t) { return {1.0, 0.0, 0.0, 1.0, t}; }

    // Composition: (f * g)(p) = f(g(p)).
    friend AffineMap operator*(const AffineMap& f, const AffineMap& g) {
        AffineMap h;
        h.m00 = f.m00 * g.m00 + f.m01 * g.m10;
        h.m01 = f.m00 * g.m01 + f.m01 * g.m11;
        h.m10 = f.m10 * g.m00 + f.m11 * g.m10;
        h.m11 = f.m10 * g.m01 + f.m11 * g.m11;
        h.shift = f(g.shift);
        return h;
    }
};

// The map F with q(F(u, v)) = u^2 + v^2: rotation onto the eigen axes composed
// with scaling by the inverse square roots of the eigenvalues. Its determinant
// is 1/sqrt(lambda_min * lambda_max).
inline AffineMap canonical_map(const QuadraticForm& q) {
    EigenData e = eigen_decompose(q);
    AffineMap rot{e.axis.x, -e.axis.y, e.axis.y, e.axis.x, {0.0, 0.0}};
    AffineMap sc = AffineMap::scaling(1.0 / std::sqrt(e.lambda_max), 1.0 / std::sqrt(e.lambda_min));
    return rot * sc;
}

// Area-`area` triangle minimizing the L_p interpolation error of q among
// triangles of that area: the canonical-map image of an equilateral triangle.
// The equilateral pre-image orientation is free; it defaults to 0.
inline Triangle optimal_triangle(const QuadraticForm& q, double area, double orientation = 0.0) {
    if (!(area > 0.0)) throw InvalidArgument("optimal_triangle: area must be positive");
    AffineMap f = canonical_map(q);
    Triangle unit = make_equilateral({0.0, 0.0}, 1.0, orientation);
    Triangle image = f(unit);
    double scale = std::sqrt(area / image.area());
    return {scale * image.a, scale * image.b, scale * image.c};
}

// Lower bound C_p |T|^(1+1/p) sqrt(det q) on the L_p interpolation error of q
// over T, valid for every triangle and attained by optimal_triangle.
inline double error_lower_bound(const QuadraticForm& q, const Triangle& t, double p,
                                double c_p = 0.0) {
    if (!q.positive_definite())
        throw NotPositiveDefinite("error_lower_bound: form is not positive definite");
    if (c_p <= 0.0) c_p = optimal_constant(p).value();
    return c_p * std::pow(t.area(), 1.0 + 1.0 / p) * std::sqrt(q.det());
}

// Smallest eigenvalue over the family of forms with 0 < a <= a_max,
// 0 < b <= b_max and det >= det_min.
inline double lambda_min_floor(double a_max, double b_max, double det_min) {
    if (!(a_max > 0.0 && b_max > 0.0 && det_min > 0.0 && det_min <= a_max * b_max))
        throw InvalidArgument("lambda_min_floor: need positive bounds with det_min <= a_max*b_max");
    double mean = 0.5 * (a_max + b_max);
    return mean - std::sqrt(mean * mean - det_min);
}

struct AspectRatioCheck {
    double ratio = 0.0;  // diam(optimal_triangle(q, 1)) / sqrt(1)
    double bound = 0.0;  // worst-case stretch sqrt(lambda_max/lambda_min) times the equilateral diameter
};

// Diameter-to-sqrt-area ratio of the optimal triangle, with the eigenvalue
// stretch bound it must stay under.
inline AspectRatioCheck aspect_ratio_check(const QuadraticForm& q) {
    EigenData e = eigen_decompose(q);
    Triangle t = optimal_triangle(q, 1.0);
    double equilateral_diam = 2.0 / std::pow(3.0, 0.25);  // unit-area equilateral side
    AspectRatioCheck out;
    out.ratio = triangle_metrics(t).diameter;
    out.bound = equilateral_diam * std::sqrt(e.lambda_max / e.lambda_min);
    return out;
}

}  // namespace optri
