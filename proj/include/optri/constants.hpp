// The optimal interpolation-error constant for the quadratic x^2 + y^2 over
// unit-area triangles, computed by three independent routes (an arccos
// integral, an incomplete-Beta closed form, and direct 2D quadrature over the
// equilateral triangle), together with the angle-parameterized error profiles
// of unit-area triangles and brute-force shape optimization over the angle
// simplex.
//
// Everything here works with the p-th power error
//     e(T)^p = integral over T of (R^2 - |x - M|^2)^p
// where M and R are the circumcenter and circumradius: for the quadratic
// x^2 + y^2 the linear interpolation error on T equals R^2 - |x - M|^2.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "optri/errors.hpp"
#include "optri/geometry.hpp"
#include "optri/parallel.hpp"
#include "optri/quadrature.hpp"

namespace optri {

inline double beta_function(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// One half of B(p+1, 1/2); the slope constant of the sector integral,
// d/dA sector_integral(A, p) = half_beta(p) * sin(A)^(2p+2).
inline double half_beta(double p) {
    if (!(p > 0.0)) throw InvalidArgument("half_beta: p must be positive");
    return 0.5 * beta_function(p + 1.0, 0.5);
}

namespace detail {

// Lower incomplete Beta integral on [0, x] for x <= 1/2 (so the (1-t) factor
// stays away from its endpoint). Substitutes t = u^2 when a < 1 to remove the
// t^(a-1) singularity at zero.
inline double incomplete_beta_lower_half(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (a < 1.0) {
        auto g = [a, b](double u) {
            return 2.0 * std::pow(u, 2.0 * a - 1.0) * std::pow(1.0 - u * u, b - 1.0);
        };
        return integrate_interval(g, 0.0, std::sqrt(x), 1e-13).value;
    }
    auto g = [a, b](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
    return integrate_interval(g, 0.0, x, 1e-13).value;
}

}  // namespace detail

// Non-regularized incomplete Beta function B(x; a, b).
inline double incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete_beta: a, b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete_beta: x must lie in [0,1]");
    if (x <= 0.5) return detail::incomplete_beta_lower_half(x, a, b);
    return beta_function(a, b) - detail::incomplete_beta_lower_half(1.0 - x, b, a);
}

// The sector integral
//     l(A) = integral from cos A to 1 of x (1 - x^2)^p arccos(cos A / x) dx
// for A in [0, pi/2]; for A in (pi/2, pi] it is continued so that the identity
// l'(A) = half_beta(p) sin(A)^(2p+2) keeps holding:
//     l(A) = integral from |cos A| to 1 of the same integrand
//            + pi/(2p+2) * (1 - sin(A)^(2p+2)).
// The integrand's derivative blows up like an inverse square root at the lower
// endpoint, so the initial partition is graded geometrically toward it.
inline double sector_integral(double angle, double p) {
    if (!(p > 0.0)) throw InvalidArgument("sector_integral: p must be positive");
    if (!(angle >= 0.0 && angle <= M_PI + 1e-12))
        throw InvalidArgument("sector_integral: angle must lie in [0, pi]");
    angle = std::min(angle, M_PI);
    if (angle == 0.0) return 0.0;

    double c = std::cos(angle);
    double lo = std::abs(c);
    double span = 1.0 - lo;
    // Integrate in the shifted variable u = x - lo so every factor keeps full
    // relative precision when the range collapses toward x = 1 (small angles):
    // 1 - x = span - u and x - c = u (or u + 2 lo when cos < 0), and
    // arccos(c/x) is evaluated as atan2(sqrt(x^2 - c^2), c).
    auto integrand = [lo, c, p, span](double u) {
        double x = lo + u;
        double one_minus_x2 = (span - u) * (1.0 + x);
        double x_minus_c = (c >= 0.0) ? u : u + 2.0 * lo;
        double s2 = x_minus_c * (x + c);
        double theta = std::atan2(std::sqrt(std::max(s2, 0.0)), c);
        return x * std::pow(std::max(one_minus_x2, 0.0), p) * theta;
    };
    double value = 0.0;
    if (span > 0.0) {
        std::vector<double> knots;
        for (int k = 1; k <= 20; ++k) knots.push_back(span * std::ldexp(1.0, -k));
        value = integrate_interval(integrand, 0.0, span, 1e-13, knots).value;
    }
    if (c < 0.0) {
        double s = std::sin(angle);
        value += M_PI / (2.0 * p + 2.0) * (1.0 - std::pow(s * s, p + 1.0));
    }
    return value;
}

// p-th power error over the isosceles circumcenter sector with apex angle
// 2*angle and equal sides R: 2 R^(2p+2) (angle/(2p+2) - l(angle)).
inline double sector_error_pow(double angle, double circumradius, double p) {
    if (!(circumradius > 0.0)) throw InvalidArgument("sector_error_pow: R must be positive");
    return 2.0 * std::pow(circumradius, 2.0 * p + 2.0) *
           (angle / (2.0 * p + 2.0) - sector_integral(angle, p));
}

namespace detail {

// d^p for the unit-area triangle with angles (A, B, C); sector decomposition
// about the circumcenter, subtracting the reflected sector when the largest
// angle is obtuse.
inline double unit_area_error_pow(double a, double b, double p) {
    double c = M_PI - a - b;
    double s = std::sin(2.0 * a) + std::sin(2.0 * b) + std::sin(2.0 * c);
    double r = std::sqrt(2.0 / s);
    double ang[3] = {a, b, c};
    std::sort(ang, ang + 3);
    double dp;
    if (ang[2] <= M_PI / 2.0)
        dp = sector_error_pow(ang[0], r, p) + sector_error_pow(ang[1], r, p) +
             sector_error_pow(ang[2], r, p);
    else
        dp = sector_error_pow(ang[0], r, p) + sector_error_pow(ang[1], r, p) -
             sector_error_pow(M_PI - ang[2], r, p);
    return std::max(dp, 0.0);
}

}  // namespace detail

// L_p error of linear interpolation of x^2 + y^2 on the unit-area triangle
// with angles (A, B, pi - A - B).
inline double unit_area_error(double angle_a, double angle_b, double p) {
    if (!(p > 0.0)) throw InvalidArgument("unit_area_error: p must be positive");
    if (!(angle_a > 0.0 && angle_b > 0.0 && angle_a + angle_b < M_PI))
        throw InvalidArgument("unit_area_error: angles must be positive with A + B < pi");
    return std::pow(detail::unit_area_error_pow(angle_a, angle_b, p), 1.0 / p);
}

// Objective for the acute branch of the shape optimization; equals d^p / 2^(p+2).
inline double shape_objective(double angle_a, double angle_b, double p) {
    double angle_c = M_PI - angle_a - angle_b;
    if (!(angle_a > 0.0 && angle_b > 0.0 && angle_c > 0.0))
        throw InvalidArgument("shape_objective: angles must be positive");
    if (angle_a >= M_PI / 2.0 || angle_b >= M_PI / 2.0 || angle_c >= M_PI / 2.0)
        throw InvalidArgument("shape_objective: triangle must be acute");
    double num = M_PI / (2.0 * p + 2.0) - sector_integral(angle_a, p) -
                 sector_integral(angle_b, p) - sector_integral(angle_c, p);
    double den = std::sin(2.0 * angle_a) + std::sin(2.0 * angle_b) + std::sin(2.0 * angle_c);
    return num / std::pow(den, p + 1.0);
}

enum class ProfileKind {
    Right,            // right triangles parameterized by one acute angle in (0, pi/2)
    IsoscelesAcute,   // isosceles non-obtuse, equal angle in [pi/4, pi/2)
    IsoscelesObtuse,  // isosceles obtuse, equal angle in (0, pi/4]
};

// Angle profiles of d^p along the three one-parameter triangle families, each
// normalized by its sin-power denominator.
inline double shape_profile(ProfileKind kind, double angle, double p) {
    switch (kind) {
        case ProfileKind::Right: {
            if (!(angle > 0.0 && angle < M_PI / 2.0))
                throw InvalidArgument("shape_profile: right-family angle must lie in (0, pi/2)");
            double num = M_PI / (4.0 * p + 4.0) - sector_integral(angle, p) -
                         sector_integral(M_PI / 2.0 - angle, p);
            return num / std::pow(std::sin(2.0 * angle), p + 1.0);
        }
        case ProfileKind::IsoscelesAcute: {
            if (!(angle >= M_PI / 4.0 && angle < M_PI / 2.0))
                throw InvalidArgument("shape_profile: acute isosceles angle must lie in [pi/4, pi/2)");
            double num = M_PI / (2.0 * p + 2.0) - 2.0 * sector_integral(angle, p) -
                         sector_integral(M_PI - 2.0 * angle, p);
            double den = 2.0 * std::sin(2.0 * angle) - std::sin(4.0 * angle);
            return num / std::pow(den, p + 1.0);
        }
        case ProfileKind::IsoscelesObtuse: {
            if (!(angle > 0.0 && angle <= M_PI / 4.0))
                throw InvalidArgument("shape_profile: obtuse isosceles angle must lie in (0, pi/4]");
            double num = -2.0 * sector_integral(angle, p) + sector_integral(2.0 * angle, p);
            double den = 2.0 * std::sin(2.0 * angle) - std::sin(4.0 * angle);
            return num / std::pow(den, p + 1.0);
        }
    }
    throw InvalidArgument("shape_profile: unknown kind");
}

enum class SignScanKind {
    RightProfile,      // expected non-positive on [0, 1]
    IsoscelesProfile,  // expected to change sign exactly once on [0, 2], inside (0, 1)
};

inline double right_profile_poly(double t, double p) {
    return p * std::pow(t, 2.0 * p + 6.0) - 2.0 * std::pow(t, 2.0 * p + 4.0) -
           (p + 2.0) * std::pow(t, 2.0 * p + 2.0) + (p + 2.0) * t * t * t * t + 2.0 * t * t - p;
}

inline double isosceles_profile_poly(double t, double p) {
    return -(2.0 * p + 1.0) * std::pow(t, 2.0 * p + 4.0) + 2.0 * (p + 2.0) * std::pow(t, 2.0 * p + 2.0) +
           (p + 1.0) * t * t * t * t - (3.0 * p + 4.0) * t * t + 2.0 * p;
}

struct SignScanResult {
    SignScanKind kind;
    double p = 0.0;
    int grid = 0;
    double max_value = 0.0;  // maximum over the grid (RightProfile)
    double argmax = 0.0;
    std::vector<std::pair<double, double>> sign_changes;  // bracketing intervals (IsoscelesProfile)
};

// Grid scan of the monotonicity-certificate polynomials. Values within 1e-12
// of zero carry no sign (both polynomials have an exact root at t = 1).
inline SignScanResult polynomial_sign_scan(SignScanKind kind, double p, int grid = 10000) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("polynomial_sign_scan: p must lie in (0,1)");
    if (grid < 1000) throw InvalidArgument("polynomial_sign_scan: grid must be at least 1000");
    SignScanResult out;
    out.kind = kind;
    out.p = p;
    out.grid = grid;
    double hi = (kind == SignScanKind::RightProfile) ? 1.0 : 2.0;
    auto poly = (kind == SignScanKind::RightProfile) ? right_profile_poly : isosceles_profile_poly;
    double max_v = -std::numeric_limits<double>::infinity(), arg = 0.0;
    int last_sign = 0;
    double last_t = 0.0;
    for (int i = 0; i <= grid; ++i) {
        double t = hi * i / grid;
        double z = poly(t, p);
        if (z > max_v) {
            max_v = z;
            arg = t;
        }
        int s = (std::abs(z) <= 1e-12) ? 0 : (z > 0 ? 1 : -1);
        if (s != 0) {
            if (last_sign != 0 && s != last_sign) out.sign_changes.push_back({last_t, t});
            last_sign = s;
            last_t = t;
        }
    }
    out.max_value = max_v;
    out.argmax = arg;
    return out;
}

// The optimal constant computed by its three routes. The closed forms must
// agree to 1e-8 relative and the quadrature route to 1e-6.
struct OptimalConstant {
    double p = 0.0;
    double arccos_form = 0.0;
    double beta_form = 0.0;
    double quadrature_form = 0.0;

    double value() const { return arccos_form; }
    double max_rel_spread() const {
        double lo = std::min({arccos_form, beta_form, quadrature_form});
        double hi = std::max({arccos_form, beta_form, quadrature_form});
        return (hi - lo) / hi;
    }
};

inline double optimal_constant_prefactor(double p) {
    return std::pow(4.0 / (3.0 * std::sqrt(3.0)), 1.0 + 1.0 / p);
}

inline OptimalConstant optimal_constant(double p, const QuadratureSpec& spec = {}) {
    if (!(p > 0.0)) throw InvalidArgument("optimal_constant: p must be positive");
    OptimalConstant out;
    out.p = p;
    double pre = optimal_constant_prefactor(p);

    double bracket_arccos = M_PI / (p + 1.0) - 6.0 * sector_integral(M_PI / 3.0, p);
    out.arccos_form = pre * std::pow(bracket_arccos, 1.0 / p);

    // The subtracted term is 6 * sector_integral(pi/3, p) in closed form:
    // substituting u = sin^2 t in the derivative identity for the sector
    // integral gives l(pi/3) = (1/4) B(p+1, 1/2) B(3/4; p+3/2, 1/2).
    double bracket_beta = M_PI / (p + 1.0) -
                          1.5 * beta_function(p + 1.0, 0.5) * incomplete_beta(0.75, p + 1.5, 0.5);
    out.beta_form = pre * std::pow(bracket_beta, 1.0 / p);

    // Direct quadrature over the equilateral triangle with unit circumradius.
    Triangle t0 = make_equilateral({0.0, 0.0}, 3.0 * std::sqrt(3.0) / 4.0, 0.0);
    auto integrand = [p](double x, double y) {
        return std::pow(std::max(1.0 - x * x - y * y, 0.0), p);
    };
    out.quadrature_form = pre * std::pow(integrate_triangle(integrand, t0, spec).value, 1.0 / p);
    return out;
}

struct ShapeScanResult {
    double p = 0.0;
    int grid = 0;
    double coarse_step = 0.0;
    double refined_step = 0.0;
    double argmin_a = 0.0;
    double argmin_b = 0.0;
    double min_value = 0.0;
    std::vector<std::array<double, 3>> table;  // (A, B, d) rows of the coarse grid, when kept
};

namespace detail {

// d on an arithmetic (A, B) grid. A_i = a_lo + i*step and B_j = b_lo + j*step,
// so the third angle and the obtuse complements also run over arithmetic
// families: sector integrals are tabulated once per family member instead of
// being recomputed per grid point.
class UnitAreaErrorGrid {
public:
    UnitAreaErrorGrid(double a_lo, double b_lo, double step, int na, int nb, double p)
        : a_lo_(a_lo), b_lo_(b_lo), step_(step), na_(na), nb_(nb), p_(p) {
        int nk = na + nb - 1;
        l_a_.resize(na);
        l_pi_a_.resize(na);
        l_b_.resize(nb);
        l_pi_b_.resize(nb);
        l_c_.resize(nk);
        l_ab_.resize(nk);
        std::size_t total = static_cast<std::size_t>(na) * 2 + nb * 2 + nk * 2;
        parallel_for(total, [&](std::size_t idx) {
            std::size_t r = idx;
            if (r < static_cast<std::size_t>(na)) { fill(l_a_, r, angle_a(static_cast<int>(r))); return; }
            r -= na;
            if (r < static_cast<std::size_t>(na)) { fill(l_pi_a_, r, M_PI - angle_a(static_cast<int>(r))); return; }
            r -= na;
            if (r < static_cast<std::size_t>(nb)) { fill(l_b_, r, angle_b(static_cast<int>(r))); return; }
            r -= nb;
            if (r < static_cast<std::size_t>(nb)) { fill(l_pi_b_, r, M_PI - angle_b(static_cast<int>(r))); return; }
            r -= nb;
            if (r < static_cast<std::size_t>(nk)) { fill(l_c_, r, angle_c(static_cast<int>(r))); return; }
            r -= nk;
            fill(l_ab_, r, M_PI - angle_c(static_cast<int>(r)));
        });
    }

    double angle_a(int i) const { return a_lo_ + i * step_; }
    double angle_b(int j) const { return b_lo_ + j * step_; }
    double angle_c(int k) const { return M_PI - (a_lo_ + b_lo_) - k * step_; }

    // d for grid point (i, j); NaN outside the open simplex.
    double operator()(int i, int j) const {
        double a = angle_a(i), b = angle_b(j), c = angle_c(i + j);
        if (!(a > 0.0 && b > 0.0 && c > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        double s = std::sin(2.0 * a) + std::sin(2.0 * b) + std::sin(2.0 * c);
        double r_pow = std::pow(2.0 / s, p_ + 1.0);  // R^(2p+2)
        auto m = [&](double angle, double l_value) {
            return 2.0 * r_pow * (angle / (2.0 * p_ + 2.0) - l_value);
        };
        double dp;
        const double half_pi = M_PI / 2.0;
        if (c >= a && c >= b) {
            dp = c <= half_pi ? m(a, l_a_[i]) + m(b, l_b_[j]) + m(c, l_c_[i + j])
                              : m(a, l_a_[i]) + m(b, l_b_[j]) - m(M_PI - c, l_ab_[i + j]);
        } else if (a >= b) {
            dp = a <= half_pi ? m(a, l_a_[i]) + m(b, l_b_[j]) + m(c, l_c_[i + j])
                              : m(b, l_b_[j]) + m(c, l_c_[i + j]) - m(M_PI - a, l_pi_a_[i]);
        } else {
            dp = b <= half_pi ? m(a, l_a_[i]) + m(b, l_b_[j]) + m(c, l_c_[i + j])
                              : m(a, l_a_[i]) + m(c, l_c_[i + j]) - m(M_PI - b, l_pi_b_[j]);
        }
        return std::pow(std::max(dp, 0.0), 1.0 / p_);
    }

private:
    void fill(std::vector<double>& table, std::size_t slot, double angle) const {
        table[slot] = (angle > 0.0 && angle < M_PI) ? sector_integral(angle, p_)
                                                    : std::numeric_limits<double>::quiet_NaN();
    }

    double a_lo_, b_lo_, step_;
    int na_, nb_;
    double p_;
    std::vector<double> l_a_, l_pi_a_, l_b_, l_pi_b_, l_c_, l_ab_;
};

}  // namespace detail

// Brute-force minimization of unit_area_error over the open angle simplex
// {A, B > margin, A + B < pi - margin}, followed by a 10x refinement pass in a
// +-2-step window around the coarse argmin. Rows run in parallel; the argmin
// reduction is sequential with ties broken toward smaller A, then smaller B.
inline ShapeScanResult scan_optimal_shape(double p, int grid = 400, bool keep_table = false,
                                          double margin = 0.01) {
    if (!(p > 0.0)) throw InvalidArgument("scan_optimal_shape: p must be positive");
    if (grid < 4) throw InvalidArgument("scan_optimal_shape: grid too small");
    ShapeScanResult out;
    out.p = p;
    out.grid = grid;
    double span = M_PI - 2.0 * margin;
    double h = span / grid;
    out.coarse_step = h;
    out.refined_step = h / 10.0;

    struct RowMin {
        double value = std::numeric_limits<double>::infinity();
        double a = 0.0, b = 0.0;
    };

    auto scan_window = [&](double a_lo, double a_hi, double b_lo, double b_hi, double step,
                           std::vector<std::array<double, 3>>* table) {
        int na = static_cast<int>(std::floor((a_hi - a_lo) / step + 0.5)) + 1;
        int nb = static_cast<int>(std::floor((b_hi - b_lo) / step + 0.5)) + 1;
        detail::UnitAreaErrorGrid d_grid(a_lo, b_lo, step, na, nb, p);
        std::vector<RowMin> rows(na);
        std::vector<std::vector<std::array<double, 3>>> row_tables(table ? na : 0);
        parallel_for(static_cast<std::size_t>(na), [&](std::size_t i) {
            double a = d_grid.angle_a(static_cast<int>(i));
            if (a < margin || a >= M_PI - margin) return;
            RowMin best;
            for (int j = 0; j < nb; ++j) {
                double b = d_grid.angle_b(j);
                if (b < margin || a + b > M_PI - margin) continue;
                double d = d_grid(static_cast<int>(i), j);
                if (!std::isfinite(d)) continue;
                if (table) row_tables[i].push_back({a, b, d});
                if (d < best.value) {
                    best = {d, a, b};
                }
            }
            rows[i] = best;
        });
        RowMin best;
        for (const RowMin& r : rows) {
            if (r.value < best.value) best = r;
        }
        if (table) {
            for (auto& rt : row_tables)
                for (auto& row : rt) table->push_back(row);
        }
        return best;
    };

    RowMin coarse = scan_window(margin, M_PI - margin, margin, M_PI - margin, h,
                                keep_table ? &out.table : nullptr);
    RowMin fine = scan_window(coarse.a - 2.0 * h, coarse.a + 2.0 * h, coarse.b - 2.0 * h,
                              coarse.b + 2.0 * h, out.refined_step, nullptr);
    out.argmin_a = fine.a;
    out.argmin_b = fine.b;
    out.min_value = fine.value;
    return out;
}

}  // namespace optri
