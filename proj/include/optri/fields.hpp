// Scalar fields on D = [0,1]^2 with second derivatives (analytic for builtins,
// Richardson-extrapolated central differences for parsed expressions), weight
// fields, the sampled modulus of continuity of the second derivatives, the
// directional curvature floor, and the asymptotic error limit.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "optri/constants.hpp"
#include "optri/errors.hpp"
#include "optri/expr.hpp"
#include "optri/geometry.hpp"
#include "optri/quadrature.hpp"

namespace optri {

inline constexpr Rect kDomain{0.0, 0.0, 1.0, 1.0};
inline constexpr double kAdmissibleFloor = 1e-6;

struct ScalarField {
    std::string name;
    std::function<double(double, double)> f, fx, fy, fxx, fxy, fyy;

    double operator()(double x, double y) const { return f(x, y); }
    double hessian(double x, double y) const {
        double h12 = fxy(x, y);
        return fxx(x, y) * fyy(x, y) - h12 * h12;
    }
};

struct WeightField {
    std::string name;
    std::function<double(double, double)> w;

    double operator()(double x, double y) const { return w(x, y); }
};

namespace detail {

// Hessian must stay above the admissibility floor and f_xx must keep one sign
// across a 64x64 sample of the domain.
inline void check_admissible(const ScalarField& field) {
    const int n = 64;
    int sign = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = (i + 0.5) / n, y = (j + 0.5) / n;
            double h = field.hessian(x, y);
            if (!(h >= kAdmissibleFloor))
                throw NotAdmissible("field '" + field.name + "': Hessian " + std::to_string(h) +
                                    " at (" + std::to_string(x) + ", " + std::to_string(y) +
                                    ") is below the positivity floor");
            double sxx = field.fxx(x, y);
            int s = sxx > 0 ? 1 : -1;
            if (sign == 0) sign = s;
            if (s != sign)
                throw NotAdmissible("field '" + field.name + "': f_xx changes sign on the domain");
        }
    }
}

inline void check_positive_weight(const WeightField& weight) {
    const int n = 64;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = (i + 0.5) / n, y = (j + 0.5) / n;
            if (!(weight(x, y) > 0.0))
                throw InvalidArgument("weight '" + weight.name + "' is not positive on the domain");
        }
}

// Second derivatives of a black-box evaluator: central differences with step h,
// extrapolated once against step h/2.
struct FiniteDifference {
    std::function<double(double, double)> f;
    double h = 1e-4;

    double dxx(double x, double y) const {
        auto d = [&](double s) { return (f(x + s, y) - 2.0 * f(x, y) + f(x - s, y)) / (s * s); };
        return (4.0 * d(h / 2) - d(h)) / 3.0;
    }
    double dyy(double x, double y) const {
        auto d = [&](double s) { return (f(x, y + s) - 2.0 * f(x, y) + f(x, y - s)) / (s * s); };
        return (4.0 * d(h / 2) - d(h)) / 3.0;
    }
    double dxy(double x, double y) const {
        auto d = [&](double s) {
            return (f(x + s, y + s) - f(x + s, y - s) - f(x - s, y + s) + f(x - s, y - s)) /
                   (4.0 * s * s);
        };
        return (4.0 * d(h / 2) - d(h)) / 3.0;
    }
    double dx(double x, double y) const {
        auto d = [&](double s) { return (f(x + s, y) - f(x - s, y)) / (2.0 * s); };
        return (4.0 * d(h / 2) - d(h)) / 3.0;
    }
    double dy(double x, double y) const {
        auto d = [&](double s) { return (f(x, y + s) - f(x, y - s)) / (2.0 * s); };
        return (4.0 * d(h / 2) - d(h)) / 3.0;
    }
};

inline std::vector<double> parse_builtin_args(std::string_view name, std::size_t open) {
    if (name.back() != ')') throw UnknownField("malformed builtin arguments in '" + std::string(name) + "'");
    std::string body(name.substr(open + 1, name.size() - open - 2));
    std::vector<double> args;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t next = body.find(',', pos);
        std::string tok = body.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            args.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw UnknownField("bad numeric argument '" + tok + "' in '" + std::string(name) + "'");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return args;
}

}  // namespace detail

// Builtin test fields: paraboloid, quadratic(A,B,C), cosh_sum, exp_product.
// All carry analytic derivatives and are admissibility-checked on construction.
inline ScalarField builtin_field(std::string_view name) {
    ScalarField out;
    out.name = std::string(name);
    if (name == "paraboloid") {
        out.f = [](double x, double y) { return x * x + y * y; };
        out.fx = [](double x, double) { return 2.0 * x; };
        out.fy = [](double, double y) { return 2.0 * y; };
        out.fxx = [](double, double) { return 2.0; };
        out.fyy = [](double, double) { return 2.0; };
        out.fxy = [](double, double) { return 0.0; };
    } else if (name == "cosh_sum") {
        out.f = [](double x, double y) { return std::cosh(x) + std::cosh(y); };
        out.fx = [](double x, double) { return std::sinh(x); };
        out.fy = [](double, double y) { return std::sinh(y); };
        out.fxx = [](double x, double) { return std::cosh(x); };
        out.fyy = [](double, double y) { return std::cosh(y); };
        out.fxy = [](double, double) { return 0.0; };
    } else if (name == "exp_product") {
        out.f = [](double x, double y) { return std::exp(x + y) + x * x + y * y; };
        out.fx = [](double x, double y) { return std::exp(x + y) + 2.0 * x; };
        out.fy = [](double x, double y) { return std::exp(x + y) + 2.0 * y; };
        out.fxx = [](double x, double y) { return std::exp(x + y) + 2.0; };
        out.fyy = [](double x, double y) { return std::exp(x + y) + 2.0; };
        out.fxy = [](double x, double y) { return std::exp(x + y); };
    } else if (name.starts_with("quadratic(")) {
        auto args = detail::parse_builtin_args(name, name.find('('));
        if (args.size() != 3)
            throw UnknownField("quadratic expects 3 arguments, got " + std::to_string(args.size()));
        double a = args[0], b = args[1], c = args[2];
        out.f = [a, b, c](double x, double y) { return a * x * x + b * y * y + 2.0 * c * x * y; };
        out.fx = [a, c](double x, double y) { return 2.0 * a * x + 2.0 * c * y; };
        out.fy = [b, c](double x, double y) { return 2.0 * b * y + 2.0 * c * x; };
        out.fxx = [a](double, double) { return 2.0 * a; };
        out.fyy = [b](double, double) { return 2.0 * b; };
        out.fxy = [c](double, double) { return 2.0 * c; };
    } else {
        throw UnknownField("unknown builtin field '" + std::string(name) + "'");
    }
    detail::check_admissible(out);
    return out;
}

// Expression-backed field; derivatives by finite differences.
inline ScalarField parse_field(std::string_view src) {
    expr::Expression e = expr::parse(src);
    detail::FiniteDifference fd{[e](double x, double y) { return e(x, y); }};
    ScalarField out;
    out.name = "expr:" + std::string(src);
    out.f = fd.f;
    out.fx = [fd](double x, double y) { return fd.dx(x, y); };
    out.fy = [fd](double x, double y) { return fd.dy(x, y); };
    out.fxx = [fd](double x, double y) { return fd.dxx(x, y); };
    out.fyy = [fd](double x, double y) { return fd.dyy(x, y); };
    out.fxy = [fd](double x, double y) { return fd.dxy(x, y); };
    detail::check_admissible(out);
    return out;
}

inline WeightField parse_weight(std::string_view src) {
    expr::Expression e = expr::parse(src);
    WeightField out{"expr:" + std::string(src), [e](double x, double y) { return e(x, y); }};
    detail::check_positive_weight(out);
    return out;
}

// Field/weight references used by the CLI: "builtin:NAME" or "expr:SRC".
inline ScalarField field_from_spec(std::string_view spec) {
    if (spec.starts_with("builtin:")) return builtin_field(spec.substr(8));
    if (spec.starts_with("expr:")) return parse_field(spec.substr(5));
    throw InvalidArgument("field spec must start with 'builtin:' or 'expr:', got '" +
                          std::string(spec) + "'");
}

inline WeightField weight_from_spec(std::string_view spec) {
    if (spec.starts_with("expr:")) return parse_weight(spec.substr(5));
    if (spec.starts_with("builtin:")) {
        ScalarField f = builtin_field(spec.substr(8));
        WeightField out{f.name, f.f};
        detail::check_positive_weight(out);
        return out;
    }
    throw InvalidArgument("weight spec must start with 'builtin:' or 'expr:', got '" +
                          std::string(spec) + "'");
}

// Sampled modulus of continuity at coordinate distance delta: the largest
// oscillation of any second derivative over grid pairs offset by up to delta
// in each coordinate (offsets delta and delta/2, clamped to the domain).
inline double modulus_estimate(const ScalarField& field, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("modulus_estimate: delta must lie in (0,1]");
    const int n = 64;
    const double offsets[3] = {0.0, 0.5 * delta, delta};
    double worst = 0.0;
    const std::function<double(double, double)>* parts[3] = {&field.fxx, &field.fyy, &field.fxy};
    for (const auto* g : parts) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double x = static_cast<double>(i) / (n - 1), y = static_cast<double>(j) / (n - 1);
                double base = (*g)(x, y);
                for (double dx : offsets) {
                    for (double dy : offsets) {
                        if (dx == 0.0 && dy == 0.0) continue;
                        double v = (*g)(std::min(x + dx, 1.0), std::min(y + dy, 1.0));
                        worst = std::max(worst, std::abs(v - base));
                    }
                }
            }
        }
    }
    return worst;
}

struct CurvatureFloor {
    double c_plus = 0.0;   // minimum of the Hessian over the domain
    double sup_fxx = 0.0;
    double sup_fyy = 0.0;
    double value = 0.0;    // c_plus/2 * min(1/sup_fxx, 1/sup_fyy)
};

// Floor on |second derivative in any unit direction|, estimated on a 256x256
// grid; a 128x128 pass must agree to 1% or the field is rejected as too rough.
inline CurvatureFloor directional_floor(const ScalarField& field) {
    auto estimate = [&](int n) {
        CurvatureFloor e;
        e.c_plus = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double x = (i + 0.5) / n, y = (j + 0.5) / n;
                e.c_plus = std::min(e.c_plus, field.hessian(x, y));
                e.sup_fxx = std::max(e.sup_fxx, std::abs(field.fxx(x, y)));
                e.sup_fyy = std::max(e.sup_fyy, std::abs(field.fyy(x, y)));
            }
        }
        e.value = 0.5 * e.c_plus * std::min(1.0 / e.sup_fxx, 1.0 / e.sup_fyy);
        return e;
    };
    CurvatureFloor fine = estimate(256), coarse = estimate(128);
    auto rough = [](double a, double b) { return std::abs(a - b) > 0.01 * std::max(std::abs(a), 1e-300); };
    if (rough(fine.c_plus, coarse.c_plus) || rough(fine.sup_fxx, coarse.sup_fxx) ||
        rough(fine.sup_fyy, coarse.sup_fyy))
        throw NotAdmissible("field '" + field.name + "': curvature estimates do not stabilize under grid refinement");
    if (!(fine.c_plus > 0.0))
        throw NotAdmissible("field '" + field.name + "': Hessian is not positive");
    return fine;
}

// The limiting value of N times the optimal weighted L_p interpolation error:
// C_p/2 times the L_{p/(p+1)} seminorm of sqrt(H) * weight over the domain.
inline double asymptotic_limit(const ScalarField& field, const WeightField& weight, double p,
                               const QuadratureSpec& spec = {.rule_degree = 10, .max_depth = 12, .rel_tol = 1e-10}) {
    if (!(p > 0.0)) throw InvalidArgument("asymptotic_limit: p must be positive");
    double c_p = optimal_constant(p).value();
    double expo_h = p / (2.0 * (p + 1.0));
    double expo_w = p / (p + 1.0);
    auto integrand = [&](double x, double y) {
        return std::pow(field.hessian(x, y), expo_h) * std::pow(weight(x, y), expo_w);
    };
    IntegralResult integral = integrate_rect(integrand, kDomain, spec);
    return 0.5 * c_p * std::pow(integral.value, (p + 1.0) / p);
}

}  // namespace optri
