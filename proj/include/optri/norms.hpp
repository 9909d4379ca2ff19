// Linear interpolants on triangles and weighted L_p interpolation error: per
// triangle via adaptive quadrature of |g - l(g,T)|^p w^p, and globally over a
// triangulation by summing p-th powers in canonical triangle order.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "optri/errors.hpp"
#include "optri/fields.hpp"
#include "optri/geometry.hpp"
#include "optri/parallel.hpp"
#include "optri/quadform.hpp"
#include "optri/quadrature.hpp"

namespace optri {

struct LinearFunction {
    double a = 0.0, b = 0.0, c = 0.0;  // a x + b y + c

    double operator()(double x, double y) const { return a * x + b * y + c; }
};

// The affine function matching g at the three vertices of t.
template <class G>
LinearFunction linear_interpolant(G&& g, const Triangle& t) {
    double det = cross(t.b - t.a, t.c - t.a);
    if (std::abs(det) < 2.0 * kSliverArea)
        throw DegenerateTriangle("linear_interpolant: degenerate triangle");
    double ga = g(t.a.x, t.a.y), gb = g(t.b.x, t.b.y), gc = g(t.c.x, t.c.y);
    LinearFunction p;
    p.a = ((gb - ga) * (t.c.y - t.a.y) - (gc - ga) * (t.b.y - t.a.y)) / det;
    p.b = ((gc - ga) * (t.b.x - t.a.x) - (gb - ga) * (t.c.x - t.a.x)) / det;
    p.c = ga - p.a * t.a.x - p.b * t.a.y;
    return p;
}

// Weighted L_p interpolation error over one triangle; `converged` is false when
// the quadrature's unresolved residual is large against the value (the value is
// still the best estimate, not an error).
struct ErrorValue {
    double p = 0.0;
    double value = 0.0;
    double pth_power = 0.0;
    double residual = 0.0;  // unresolved quadrature residual, p-th power scale
    bool converged = true;
};

struct UnitWeight {
    double operator()(double, double) const { return 1.0; }
};

template <class G, class W = UnitWeight>
ErrorValue cell_error(G&& g, const Triangle& t, double p, W&& weight = {},
                      const QuadratureSpec& spec = {}) {
    if (!(p > 0.0)) throw InvalidArgument("cell_error: p must be positive");
    LinearFunction interp = linear_interpolant(g, t);
    auto integrand = [&](double x, double y) {
        double e = std::abs(g(x, y) - interp(x, y));
        return std::pow(e, p) * std::pow(weight(x, y), p);
    };
    IntegralResult integral = integrate_triangle(integrand, t, spec);
    ErrorValue out;
    out.p = p;
    out.pth_power = std::max(integral.value, 0.0);
    out.value = std::pow(out.pth_power, 1.0 / p);
    out.residual = integral.residual;
    out.converged = integral.converged;
    return out;
}

// Global error of the interpolating spline on a triangulation: the p-th powers
// of the per-triangle errors are accumulated in triangle order (deterministic),
// with per-triangle integrals running in parallel.
template <class G, class W = UnitWeight>
ErrorValue global_error(G&& g, const Triangulation& tri, double p, W&& weight = {},
                        const QuadratureSpec& spec = {}) {
    if (tri.triangles.empty()) throw InvalidTriangulation("global_error: empty triangulation");
    double total_area = 0.0;
    for (std::size_t i = 0; i < tri.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            int v = tri.triangles[i][k];
            if (v < 0 || v >= static_cast<int>(tri.vertices.size()))
                throw InvalidTriangulation("global_error: vertex index out of range");
        }
        total_area += tri.triangle(i).area();
    }
    if (std::abs(total_area - tri.domain.area()) > 1e-8)
        throw InvalidTriangulation("global_error: triangles do not cover the domain (area " +
                                   std::to_string(total_area) + " vs " +
                                   std::to_string(tri.domain.area()) + ")");

    std::vector<ErrorValue> per(tri.size());
    parallel_for(tri.size(), [&](std::size_t i) { per[i] = cell_error(g, tri.triangle(i), p, weight, spec); });

    ErrorValue out;
    out.p = p;
    for (const ErrorValue& e : per) {
        out.pth_power += e.pth_power;
        out.residual += e.residual;
    }
    out.value = std::pow(out.pth_power, 1.0 / p);
    out.converged = out.residual <= 4.0 * spec.rel_tol * out.pth_power + 1e-300;
    return out;
}

// Both sides of the affine change-of-variables identity
//   d(q o F, F^{-1}(T), L_p) = d(q, T, L_p) * (1/|det F|)^(1/p),
// each computed by independent quadrature.
inline std::pair<double, double> affine_transport_check(const QuadraticForm& q, const Triangle& t,
                                                        const AffineMap& map, double p,
                                                        const QuadratureSpec& spec = {}) {
    if (std::abs(map.det()) < 1e-300)
        throw InvalidArgument("affine_transport_check: map is singular");
    AffineMap inv = map.inverse();
    Triangle pre = inv(t);
    auto composed = [&](double x, double y) {
        Point2 im = map(Point2{x, y});
        return q(im.x, im.y);
    };
    double lhs = cell_error(composed, pre, p, UnitWeight{}, spec).value;
    double rhs = cell_error(q, t, p, UnitWeight{}, spec).value *
                 std::pow(1.0 / std::abs(map.det()), 1.0 / p);
    return {lhs, rhs};
}

// Lower bound C_p |T|^(1+1/p) sqrt(det q) next to the actual quadrature value;
// the bound is attained exactly by optimal_triangle images.
inline std::pair<double, double> lower_bound_check(const QuadraticForm& q, const Triangle& t,
                                                   double p, const QuadratureSpec& spec = {}) {
    double bound = error_lower_bound(q, t, p);
    double actual = cell_error(q, t, p, UnitWeight{}, spec).value;
    return {bound, actual};
}

// Sampled sup of |f - P2| on a square against the bound 2 h^2 w(h), where P2 is
// the second-order Taylor polynomial at the square's center and w the sampled
// modulus of the second derivatives.
inline std::pair<double, double> taylor_bound_check(const ScalarField& field, const Rect& square) {
    double h = square.width();
    double cx = 0.5 * (square.x0 + square.x1), cy = 0.5 * (square.y0 + square.y1);
    double f0 = field(cx, cy);
    double gx = field.fx(cx, cy), gy = field.fy(cx, cy);
    double hxx = field.fxx(cx, cy), hxy = field.fxy(cx, cy), hyy = field.fyy(cx, cy);
    double sup = 0.0;
    const int n = 33;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = square.x0 + square.width() * i / (n - 1);
            double y = square.y0 + square.height() * j / (n - 1);
            double dx = x - cx, dy = y - cy;
            double taylor = f0 + gx * dx + gy * dy + 0.5 * hxx * dx * dx + hxy * dx * dy +
                            0.5 * hyy * dy * dy;
            sup = std::max(sup, std::abs(field(x, y) - taylor));
        }
    }
    double bound = 2.0 * h * h * modulus_estimate(field, h);
    return {sup, bound};
}

}  // namespace optri
