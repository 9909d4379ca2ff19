// Numerical integration: a symmetric 25-point rule of polynomial degree 10 on
// the triangle (Dunavant), composed with adaptive 4-way midpoint subdivision,
// plus an adaptive Gauss-Legendre integrator on intervals.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "optri/errors.hpp"
#include "optri/geometry.hpp"

namespace optri {

// Controls for adaptive triangle integration. The base rule is exact for
// bivariate polynomials up to total degree `rule_degree` on any triangle.
struct QuadratureSpec {
    int rule_degree = 10;
    int max_depth = 12;
    double rel_tol = 1e-9;
};

struct IntegralResult {
    double value = 0.0;
    bool converged = true;  // unresolved residual stayed within the tolerance
    int depth_used = 0;
    double residual = 0.0;  // error estimate left unresolved at the depth cap

    operator double() const { return value; }
};

namespace quad {

struct BaryPoint {
    double l1, l2, l3, w;
};

// Dunavant's 25-point degree-10 rule, in barycentric coordinates with weights
// normalized to sum to 1.
inline const std::vector<BaryPoint>& triangle_rule() {
    static const std::vector<BaryPoint> rule = [] {
        std::vector<BaryPoint> pts;
        auto centroid = [&](double w) { pts.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, w}); };
        auto sym3 = [&](double a, double w) {
            double c = 1.0 - 2.0 * a;
            pts.push_back({a, a, c, w});
            pts.push_back({a, c, a, w});
            pts.push_back({c, a, a, w});
        };
        auto sym6 = [&](double a, double b, double w) {
            double c = 1.0 - a - b;
            pts.push_back({a, b, c, w});
            pts.push_back({a, c, b, w});
            pts.push_back({b, a, c, w});
            pts.push_back({b, c, a, w});
            pts.push_back({c, a, b, w});
            pts.push_back({c, b, a, w});
        };
        centroid(0.090817990382754);
        sym3(0.485577633383657, 0.036725957756467);
        sym3(0.109481575485037, 0.045321059435528);
        sym6(0.141707219414880, 0.307939838764121, 0.072757916845420);
        sym6(0.025003534762686, 0.246672560639903, 0.028327242531057);
        sym6(0.009540815400299, 0.066803251012200, 0.009421666963733);
        return pts;
    }();
    return rule;
}

struct RuleValue {
    double value = 0.0;
    double abs_value = 0.0;  // sum of |weighted samples|; the roundoff scale
};

template <class F>
RuleValue apply_rule_abs(F&& f, const Triangle& t) {
    double s = 0.0, sa = 0.0;
    for (const BaryPoint& p : triangle_rule()) {
        double x = p.l1 * t.a.x + p.l2 * t.b.x + p.l3 * t.c.x;
        double y = p.l1 * t.a.y + p.l2 * t.b.y + p.l3 * t.c.y;
        double v = p.w * f(x, y);
        s += v;
        sa += std::abs(v);
    }
    return {s * t.area(), sa * t.area()};
}

template <class F>
double apply_rule(F&& f, const Triangle& t) {
    return apply_rule_abs(f, t).value;
}

inline std::array<Triangle, 4> split4(const Triangle& t) {
    Point2 mab = 0.5 * (t.a + t.b), mbc = 0.5 * (t.b + t.c), mca = 0.5 * (t.c + t.a);
    return {Triangle{t.a, mab, mca}, Triangle{mab, t.b, mbc}, Triangle{mca, mbc, t.c},
            Triangle{mab, mbc, mca}};
}

// A node is accepted when one further subdivision moves its value by less than
// its share of the absolute error budget (split across children so the shares
// sum to the root budget), by less than the relative tolerance of its own
// value, or by less than the attainable roundoff floor of the samples.
template <class F>
void adapt(F&& f, const Triangle& t, double coarse, double budget, int depth,
           const QuadratureSpec& spec, IntegralResult& out) {
    auto children = split4(t);
    double fine = 0.0, noise = 0.0;
    std::array<double, 4> child_vals;
    for (int i = 0; i < 4; ++i) {
        RuleValue rv = apply_rule_abs(f, children[i]);
        child_vals[i] = rv.value;
        fine += rv.value;
        noise += rv.abs_value;
    }
    out.depth_used = std::max(out.depth_used, depth);
    double err = std::abs(fine - coarse);
    if (err <= budget || err <= spec.rel_tol * std::abs(fine) ||
        err <= 64.0 * std::numeric_limits<double>::epsilon() * noise) {
        out.value += fine;
        return;
    }
    if (depth >= spec.max_depth) {
        out.value += fine;
        out.residual += err;
        return;
    }
    for (int i = 0; i < 4; ++i)
        adapt(f, children[i], child_vals[i], budget / 4.0, depth + 1, spec, out);
}

}  // namespace quad

// Adaptive integral of f over a triangle, accurate to roughly rel_tol of the
// total. Whatever stays unresolved at the depth cap is accumulated into the
// residual; the result counts as converged while that residual is small
// against the value (the best estimate is always returned, never thrown).
template <class F>
IntegralResult integrate_triangle(F&& f, const Triangle& t, const QuadratureSpec& spec = {}) {
    if (t.area() < kSliverArea) return {0.0, true, 0, 0.0};
    IntegralResult out;
    double coarse = quad::apply_rule(f, t);
    double budget = spec.rel_tol * std::abs(coarse);
    quad::adapt(f, t, coarse, budget, 1, spec, out);
    out.converged = out.residual <= 4.0 * spec.rel_tol * std::abs(out.value) + 1e-300;
    return out;
}

template <class F>
IntegralResult integrate_rect(F&& f, const Rect& r, const QuadratureSpec& spec = {}) {
    Triangle lower{{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}};
    Triangle upper{{r.x0, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    IntegralResult a = integrate_triangle(f, lower, spec);
    IntegralResult b = integrate_triangle(f, upper, spec);
    IntegralResult out{a.value + b.value, true, std::max(a.depth_used, b.depth_used),
                       a.residual + b.residual};
    out.converged = out.residual <= 4.0 * spec.rel_tol * std::abs(out.value) + 1e-300;
    return out;
}

namespace quad {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the Legendre
// recurrence; accurate to machine precision for the small n used here.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_15() {
    static const auto nw = [] {
        const int n = 15;
        std::vector<double> x(n), w(n);
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double step = p1 / dp;
                t -= step;
                if (std::abs(step) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        return std::make_pair(x, w);
    }();
    return nw;
}

struct PanelValue {
    double value = 0.0;
    double abs_value = 0.0;
};

template <class F>
PanelValue gl15(F&& f, double a, double b) {
    const auto& [x, w] = gauss_legendre_15();
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0, sa = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = w[i] * f(mid + half * x[i]);
        s += v;
        sa += std::abs(v);
    }
    return {s * half, sa * half};
}

template <class F>
double adapt_1d(F&& f, double a, double b, double whole, double budget, double rel_tol, int depth,
                int max_depth, double& residual) {
    double m = 0.5 * (a + b);
    PanelValue left = gl15(f, a, m), right = gl15(f, m, b);
    double fine = left.value + right.value;
    double err = std::abs(fine - whole);
    if (err <= budget || err <= rel_tol * std::abs(fine) ||
        err <= 64.0 * std::numeric_limits<double>::epsilon() * (left.abs_value + right.abs_value))
        return fine;
    if (depth >= max_depth) {
        residual += err;
        return fine;
    }
    return adapt_1d(f, a, m, left.value, budget / 2.0, rel_tol, depth + 1, max_depth, residual) +
           adapt_1d(f, m, b, right.value, budget / 2.0, rel_tol, depth + 1, max_depth, residual);
}

}  // namespace quad

// Adaptive 1D integral over [a, b]. `breakpoints` (if given) seed the initial
// partition; integrands with mild endpoint singularities should pass a
// geometrically graded partition toward the singular end. Each panel receives
// an equal share of the absolute error budget rel_tol * |rough estimate|.
template <class F>
IntegralResult integrate_interval(F&& f, double a, double b, double rel_tol = 1e-12,
                                  const std::vector<double>& breakpoints = {}, int max_depth = 30) {
    if (!(b > a)) return {0.0, true, 0};
    std::vector<double> knots{a};
    for (double t : breakpoints)
        if (t > a && t < b) knots.push_back(t);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());

    std::size_t panels = knots.size() - 1;
    std::vector<double> rough(panels);
    double total = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        rough[i] = quad::gl15(f, knots[i], knots[i + 1]).value;
        total += std::abs(rough[i]);
    }
    double budget = rel_tol * total / static_cast<double>(panels);

    IntegralResult out;
    for (std::size_t i = 0; i < panels; ++i)
        out.value += quad::adapt_1d(f, knots[i], knots[i + 1], rough[i], budget, rel_tol, 0,
                                    max_depth, out.residual);
    out.converged = out.residual <= 4.0 * rel_tol * std::abs(out.value) + 1e-300;
    return out;
}

}  // namespace optri
